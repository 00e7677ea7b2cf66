#include "beamres/oracle.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "beamres/errors.hpp"

namespace beamres {

namespace {
constexpr cd I{0.0, 1.0};
using State = std::array<cd, 2>;
namespace ode = boost::numeric::odeint;

struct Rhs {
    const CompactCoeff* p;
    cd k2;
    double lo, hi;  // current interval; p evaluated from inside it
    void operator()(const State& y, State& dy, double x) const {
        const double xs = std::clamp(x, std::nextafter(lo, hi), std::nextafter(hi, lo));
        dy[0] = y[1];
        dy[1] = -(k2 + (*p)(xs)) * y[0];
    }
};

// Integrate y from the right end down to 0, calling visit at every breakpoint.
template <class Visit>
State integrate_back(const CompactCoeff& p, cd k, double tol, Visit visit) {
    const double gamma = p.support_end();
    // start from (1, ik) and carry e^{ik gamma} apart so the step control sees unit-size data
    const cd scale = std::exp(I * k * gamma);
    auto scaled = [&](const State& s) { return State{scale * s[0], scale * s[1]}; };
    State y{1.0, I * k};
    visit(gamma, scaled(y));
    if (p.is_zero()) {
        y = State{1.0, I * k};
        visit(0.0, y);
        return y;
    }
    auto br = p.breakpoints();
    br.insert(br.begin(), 0.0);
    br.push_back(gamma);
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    auto stepper = ode::make_controlled(tol, tol, ode::runge_kutta_fehlberg78<State>());
    for (std::size_t i = br.size() - 1; i > 0; --i) {
        const double hi = br[i], lo = br[i - 1];
        if (hi <= lo) continue;
        Rhs rhs{&p, k * k, lo, hi};
        const double dt0 = -std::min(1e-2, (hi - lo) / 8.0);
        try {
            ode::integrate_adaptive(stepper, rhs, y, hi, lo, dt0);
        } catch (const std::exception& e) {
            std::ostringstream os;
            os << "ODE step control failed at k = " << k << ": " << e.what();
            throw OdeFailure(os.str());
        }
        if (!std::isfinite(std::abs(y[0])) || !std::isfinite(std::abs(y[1]))) {
            std::ostringstream os;
            os << "ODE solution overflow at k = " << k;
            throw OdeFailure(os.str());
        }
        visit(lo, scaled(y));
    }
    y = scaled(y);
    if (!std::isfinite(std::abs(y[0]))) {
        std::ostringstream os;
        os << "ODE solution overflow at k = " << k;
        throw OdeFailure(os.str());
    }
    return y;
}
}  // namespace

JostEval jost_d(const CompactCoeff& p, cd k, double tol) {
    if (k == cd(0.0)) throw KTooSmall("jost_d needs k != 0");
    JostEval e;
    e.k = k;
    e.ode_tolerance = tol;
    e.d = integrate_back(p, k, tol, [](double, const State&) {})[0];
    return e;
}

cd jost_d_constant(double c, double gamma, cd k) {
    const cd kap = std::sqrt(k * k + c);
    // d = e^{ik gamma} (cos kap gamma - i k sin(kap gamma)/kap), even in kap
    cd sinc = (std::abs(kap) < 1e-8) ? cd(gamma) : std::sin(kap * gamma) / kap;
    return std::exp(I * k * gamma) * (std::cos(kap * gamma) - I * k * sinc);
}

cd oracle_D(const CompactCoeff& p, cd k, double tol) {
    return jost_d(p, I * k, tol).d * jost_d(p, k, tol).d;
}

std::vector<cd> jost_wronskians(const CompactCoeff& p, double k, double tol) {
    std::vector<cd> w;
    integrate_back(p, cd(k), tol, [&](double, const State& y) {
        w.push_back(y[0] * std::conj(y[1]) - y[1] * std::conj(y[0]));
    });
    return w;
}

}  // namespace beamres
