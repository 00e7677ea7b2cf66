#pragma once

#include <complex>
#include <functional>

namespace beamres {

// Adaptive Gauss-Kronrod on real and imaginary parts.
std::complex<double> integrate_complex(const std::function<std::complex<double>(double)>& f, double a, double b,
                                       double tol = 1e-13);

double integrate_real(const std::function<double(double)>& f, double a, double b, double tol = 1e-13);

}  // namespace beamres
