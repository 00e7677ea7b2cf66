#pragma once

#include <complex>

#include "beamres/coeffs.hpp"
#include "beamres/kernels.hpp"

namespace beamres {

struct JostEval {
    cd k;
    cd d;
    double ode_tolerance = 1e-11;
};

// f_+(0,k) for h = -d^2 - p by backward integration from x = gamma.
JostEval jost_d(const CompactCoeff& p, cd k, double ode_tolerance = 1e-11);

// Closed form for p = c on [0,gamma].
cd jost_d_constant(double c, double gamma, cd k);

// d(ik) d(k), which equals D(k) when q = p'' + p^2.
cd oracle_D(const CompactCoeff& p, cd k, double ode_tolerance = 1e-11);

// Wronskian y conj(y)' - y' conj(y) along the backward solution for real k, sampled at the breakpoints.
std::vector<cd> jost_wronskians(const CompactCoeff& p, double k, double ode_tolerance = 1e-11);

}  // namespace beamres
