#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "beamres/coeffs.hpp"
#include "beamres/fredholm.hpp"

namespace beamres {

inline cd c_k(cd k) { return M_PI / (cd(0.0, 2.0) * k * k * k); }

// psi1(k) as a row and psi2(k) as a column on the grid of b (same weight splitting as Y0).
struct PsiPair {
    Eigen::VectorXcd row;
    Eigen::VectorXcd col;
};
PsiPair psi_functionals(const NystromBlock& b, cd k);
PsiPair psi_functionals(const CoeffPair& c, cd k, const Quadrature& quad);

// Closed forms by adaptive quadrature.
cd A0(const CoeffPair& c, cd k);
cd B_of_k(const CoeffPair& c, cd k);

// psi1 Y0 (I+Y0)^{-1} psi2 on a single grid.
cd A1(const CoeffPair& c, cd k, const Quadrature& quad);

struct ScatteringEval {
    cd k;
    cd S{1.0, 0.0};
    cd A0;
    cd A1;
    cd B;
    Eigen::Matrix2cd Omega = Eigen::Matrix2cd::Identity();
    cd detOmega{1.0, 0.0};
    int order = 0;
    double err_est = 0.0;
};

// unitarity is checked to 1e-8; refinement stops at half that
inline constexpr DetOptions scattering_defaults{.tol = 5e-9};

// S = 1 + c_k (A0 - A1), A1 extrapolated over doubling grids.
ScatteringEval S_matrix(const CoeffPair& c, cd k, const DetOptions& opts = scattering_defaults);
// Omega = 1 + c_k (Omega0 - Omega1).
ScatteringEval Omega(const CoeffPair& c, cd k, const DetOptions& opts = scattering_defaults);

struct PhaseTrace {
    std::vector<double> k;
    std::vector<double> phi;
    std::vector<cd> S;
};

// phi = (i / 2 pi) log S, unwound from the largest k where phi is taken near 0.
PhaseTrace scattering_phase(const CoeffPair& c, const std::vector<double>& k_grid, const DetOptions& opts = scattering_defaults,
                            int max_refine = 12);

}  // namespace beamres
