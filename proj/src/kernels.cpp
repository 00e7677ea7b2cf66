#include "beamres/kernels.hpp"

#include <cmath>
#include <sstream>

#include "beamres/errors.hpp"

namespace beamres {

namespace {
constexpr cd I{0.0, 1.0};

double sgn(double v) { return (v > 0) - (v < 0); }
}  // namespace

void check_k(cd k, double floor) {
    if (!(std::abs(k) >= floor)) {
        std::ostringstream os;
        os << "|k| = " << std::abs(k) << " below k_min = " << floor << " at k = " << k;
        throw KTooSmall(os.str());
    }
}

cd r0(double x, double y, cd k, double floor) {
    check_k(k, floor);
    const double d = std::abs(x - y), s = x + y;
    return I / (2.0 * k) * (std::exp(I * k * d) - std::exp(I * k * s));
}

cd n0(double x, double y, cd k, double floor) {
    check_k(k, floor);
    const double d = std::abs(x - y), s = x + y;
    return I / (2.0 * k) * (std::exp(I * k * d) + std::exp(I * k * s));
}

cd R0(double x, double y, cd k, double floor) {
    check_k(k, floor);
    const double d = std::abs(x - y), s = x + y;
    return I / (4.0 * k * k * k) *
           (std::exp(I * k * d) - std::exp(I * k * s) + I * std::exp(-k * d) - I * std::exp(-k * s));
}

cd dR0_dx(double x, double y, cd k, double floor) {
    check_k(k, floor);
    const double d = std::abs(x - y), s = x + y, g = sgn(x - y);
    return -1.0 / (4.0 * k * k) *
           (g * std::exp(I * k * d) - std::exp(I * k * s) - g * std::exp(-k * d) + std::exp(-k * s));
}

cd dR0_dy(double x, double y, cd k, double floor) { return dR0_dx(y, x, k, floor); }

cd dR0_dxdy(double x, double y, cd k, double floor) {
    check_k(k, floor);
    const double d = std::abs(x - y), s = x + y;
    return 1.0 / (4.0 * k) *
           (I * std::exp(I * k * d) + I * std::exp(I * k * s) + std::exp(-k * d) + std::exp(-k * s));
}

}  // namespace beamres
