#pragma once

#include <complex>

namespace beamres {

using cd = std::complex<double>;

// Smallest admissible |k| for support length gamma.
inline double k_min(double gamma) { return 1e-3 / gamma; }

// Throws KTooSmall when |k| < floor.
void check_k(cd k, double floor);

// Dirichlet kernel of (-d^2 - k^2)^{-1} on the half-line.
cd r0(double x, double y, cd k, double floor = 1e-3);
// Neumann counterpart: (i/2k)(e^{ik|x-y|} + e^{ik(x+y)}).
cd n0(double x, double y, cd k, double floor = 1e-3);
// Kernel of (d^4 - k^4)^{-1} with y(0) = y''(0) = 0.
cd R0(double x, double y, cd k, double floor = 1e-3);
// d/dx R0 with sign(0) = 0 on the diagonal.
cd dR0_dx(double x, double y, cd k, double floor = 1e-3);
cd dR0_dy(double x, double y, cd k, double floor = 1e-3);
// Mixed partial d^2/dxdy R0 = (n0(k) + n0(ik)) / 2.
cd dR0_dxdy(double x, double y, cd k, double floor = 1e-3);

}  // namespace beamres
