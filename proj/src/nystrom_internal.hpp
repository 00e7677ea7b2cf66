#pragma once

#include <Eigen/Dense>

#include "beamres/fredholm.hpp"

namespace beamres::detail {

// Y0 on a grid with I + Y0 factorized once.
struct Factored {
    NystromBlock b;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu;
    cd log_det;
};

Factored factor(const CoeffPair& c, cd k, const Quadrature& quad);

// row . Y0 (I+Y0)^{-1} . col
cd contract(const Factored& f, const Eigen::VectorXcd& row, const Eigen::VectorXcd& col);

// Omega at the grid of f (f.b.k is the argument), with or without closed forms for Omega0.
Eigen::Matrix2cd omega_matrix(const Factored& f, const Eigen::Matrix2cd* omega0);

// Discrete S factor: 1 + c_k (psi1 psi2 - psi1 Y psi2).
cd s_factor(const Factored& f);

int quadrant(cd k);

// Richardson step on logs of two successive levels whose errors differ by `ratio`.
cd richardson_log(cd coarse, cd fine, double ratio = 4.0);
// Error left after last_step when steps shrink geometrically.
double tail_estimate(double previous_step, double last_step);
// Richardson eliminations over levels at doubling orders.
cd romberg_log(const std::vector<cd>& levels, int eliminations = 2);

}  // namespace beamres::detail
