"""Fredholm determinants, resonances and scattering for fourth-order operators on the half-line."""

from ._core import (
    CoeffPair,
    CompactCoeff,
    __version__,
    asymptotic_seeds,
    det,
    jost_d,
    kappa_integral,
    load_pq,
    newton_zero,
    scattering_matrix,
    winding_number,
)

__all__ = [
    "CoeffPair",
    "CompactCoeff",
    "__version__",
    "asymptotic_seeds",
    "det",
    "jost_d",
    "kappa_integral",
    "load_pq",
    "newton_zero",
    "scattering_matrix",
    "winding_number",
]
