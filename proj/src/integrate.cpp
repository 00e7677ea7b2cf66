#include "beamres/integrate.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace beamres {

using GK = boost::math::quadrature::gauss_kronrod<double, 61>;

std::complex<double> integrate_complex(const std::function<std::complex<double>(double)>& f, double a, double b,
                                       double tol) {
    if (b <= a) return 0.0;
    double re = GK::integrate([&](double x) { return f(x).real(); }, a, b, 12, tol);
    double im = GK::integrate([&](double x) { return f(x).imag(); }, a, b, 12, tol);
    return {re, im};
}

double integrate_real(const std::function<double(double)>& f, double a, double b, double tol) {
    if (b <= a) return 0.0;
    return GK::integrate(f, a, b, 12, tol);
}

}  // namespace beamres
