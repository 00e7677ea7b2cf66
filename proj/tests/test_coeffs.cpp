#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "doctest.h"

#include "beamres/coeffs.hpp"
#include "beamres/errors.hpp"

using namespace beamres;

namespace {

double quad(const std::function<double(double)>& f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-14);
}

// a - 1 = ca x^2 (1-x)^4, b - 1 = cb x^2 (1-x)^4: flat to third order at x = 1, a'(0) = b'(0) = 0.
BeamCoeffs bump_beam(double ca, double cb) {
    auto bump = [](double c) {
        // c x^2 (1 - 4x + 6x^2 - 4x^3 + x^4)
        return CompactCoeff::from_monomial(1.0, {{0.0, 1.0, {0, 0, c, -4 * c, 6 * c, -4 * c, c}}});
    };
    return {bump(ca), bump(cb)};
}

double bump(double c, double x) { return c * x * x * std::pow(1 - x, 4); }
double dbump(double c, double x) { return c * (2 * x * std::pow(1 - x, 4) - 4 * x * x * std::pow(1 - x, 3)); }

}  // namespace

TEST_CASE("evaluation of simple coefficients") {
    CHECK(CompactCoeff::zero(1.0)(0.3) == 0.0);
    const auto s = CompactCoeff::step(2.0, 0.0, 1.0, 1.0);
    CHECK(s(0.5) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(s(1.5) == 0.0);
    CHECK(s(-0.1) == 0.0);
    CHECK(s.left(1.0) == doctest::Approx(2.0));
}

TEST_CASE("continuous spline agrees from both sides at its breakpoints") {
    // C^2 cubic spline made of two pieces sharing value and slopes at x = 0.5
    const auto f = CompactCoeff::from_monomial(
        1.0, {{0.0, 0.5, {0.0, 0.0, 3.0, -2.0}}, {0.5, 1.0, {0.5, 1.5, 0.0, -2.0}}});
    CHECK(std::abs(f.left(0.5) - f.right(0.5)) < 1e-12);
    const auto df = f.derivative();
    CHECK(std::abs(df.left(0.5) - df.right(0.5)) < 1e-12);
}

TEST_CASE("monomial round trip and calculus") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> c(6);
        for (auto& v : c) v = u(rng);
        const auto f = CompactCoeff::from_monomial(2.0, {{0.5, 2.0, c}});
        auto poly = [&](double x) {
            double s = 0;
            for (int j = 5; j >= 0; --j) s = s * (x - 0.5) + c[j];
            return s;
        };
        const double x = 0.5 + 1.5 * (u(rng) + 1) / 2;
        CHECK(std::abs(f(x) - poly(x)) < 1e-13);
        CHECK(std::abs(f.integral() - quad(poly, 0.5, 2.0)) < 1e-13);
        const auto m = f.monomial(0);
        for (int j = 0; j < 6; ++j) CHECK(std::abs(m[j] - c[j]) < 1e-11);
    }
}

TEST_CASE("degree above the cap is rejected") {
    std::vector<double> c(CompactCoeff::max_monomial_degree + 2, 1.0);
    CHECK_THROWS_AS(CompactCoeff::from_monomial(1.0, {{0.0, 1.0, c}}), InputError);
}

TEST_CASE("coefficient pair scalars") {
    const CoeffPair c(CompactCoeff::step(2.0, 0.0, 1.0, 1.0), CompactCoeff::step(-0.5, 0.2, 0.7, 1.0));
    CHECK(c.gamma == 1.0);
    CHECK(c.p0 == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(c.q0 == doctest::Approx(-0.25).epsilon(1e-12));
    CHECK(c.p_plus == 2.0);
    const auto br = c.breakpoints();
    CHECK(br.front() == 0.0);
    CHECK(br.back() == 1.0);
    CHECK(br.size() == 4);
}

TEST_CASE("identity beam transforms to zero") {
    const BeamCoeffs beam{CompactCoeff::zero(1.0), CompactCoeff::zero(1.0)};
    const auto d = liouville_data(beam);
    CHECK(d.pq.gamma == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(d.pq.p.max_abs() < 1e-12);
    CHECK(d.pq.q.max_abs() < 1e-12);
    CHECK(kappa_integral(beam) == 0.0);
}

TEST_CASE("support length of a stiffened beam") {
    const auto beam = bump_beam(0.0, 10.0);
    const double g = quad([](double x) { return std::pow(1 + bump(10.0, x), 0.25); }, 0.0, 1.0);
    CHECK(std::abs(liouville_transform(beam).gamma - g) < 1e-10);
}

TEST_CASE("mean of p is minus half the mean of kappa") {
    for (auto [ca, cb] : {std::pair{20.0, 10.0}, {0.0, 10.0}, {-3.0, 8.0}, {5.0, 5.0}}) {
        const auto beam = bump_beam(ca, cb);
        const auto d = liouville_data(beam);
        CHECK(std::abs(d.pq.p.integral() + 0.5 * d.kappa.integral()) < 1e-9);
    }
}

TEST_CASE("kappa lower bound") {
    for (auto [ca, cb] : {std::pair{20.0, 10.0}, {0.0, 10.0}, {-3.0, 8.0}}) {
        const auto beam = bump_beam(ca, cb);
        // alpha = (a'/a)(a/b)^{1/4} in t, so int alpha^2 dt = int (a'/a)^2 (a/b)^{1/4} dx
        auto ab = [&](double x) { return std::pow((1 + bump(ca, x)) / (1 + bump(cb, x)), 0.25); };
        const double aa = quad([&](double x) { return std::pow(dbump(ca, x) / (1 + bump(ca, x)), 2) * ab(x); }, 0, 1);
        const double bb = quad([&](double x) { return std::pow(dbump(cb, x) / (1 + bump(cb, x)), 2) * ab(x); }, 0, 1);
        const double k = kappa_integral(beam);
        CHECK(k >= (aa + bb) / 16 - 1e-12);
        CHECK(k > 0);
    }
}

TEST_CASE("equal bumps give kappa = alpha^2 / 2") {
    const auto beam = bump_beam(10.0, 10.0);
    // t = x, alpha = a'/a
    const double ref = quad([](double x) { return 0.5 * std::pow(dbump(10.0, x) / (1 + bump(10.0, x)), 2); }, 0, 1);
    CHECK(std::abs(kappa_integral(beam) - ref) < 1e-10 * (1 + ref));
}

TEST_CASE("t(x) is increasing and its inverse is accurate") {
    const BeamMap map(bump_beam(20.0, 10.0));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double prev = -1;
    for (int i = 0; i <= 100; ++i) {
        const double t = map.t_of_x(i / 100.0);
        CHECK(t > prev);
        prev = t;
    }
    for (int i = 0; i < 100; ++i) {
        const double ts = u(rng) * map.gamma();
        CHECK(std::abs(map.t_of_x(map.x_of_t(ts)) - ts) < 1e-10);
    }
}

TEST_CASE("beam validation") {
    CHECK_THROWS_AS(bump_beam(-100.0, 0.0).validate(), NonPositiveCoefficient);
    // a = 1 + x(1-x)^4 has a'(0) = 1, so 3a'/a + 5b'/b = 3 at x = 0
    const BeamCoeffs bad{CompactCoeff::from_monomial(1.0, {{0.0, 1.0, {0, 1, -4, 6, -4, 1}}}), CompactCoeff::zero(1.0)};
    CHECK_THROWS_AS(liouville_transform(bad), BoundaryConstraintViolated);
}

TEST_CASE("square case q") {
    CHECK(square_case_q(CompactCoeff::from_monomial(1.0, {{0.0, 1.0, {0, 0, 0}}})).max_abs() == 0.0);
    // p = x^2 (1-x)^2
    const auto p = CompactCoeff::from_monomial(1.0, {{0.0, 1.0, {0, 0, 1, -2, 1}}});
    const auto q = square_case_q(p);
    CHECK(std::abs(q(0.5) - (-1.0 + 0.00390625)) < 1e-13);
    CHECK_THROWS_AS(square_case_q(CompactCoeff::step(1.0, 0.0, 1.0, 1.0)), InsufficientSmoothness);
}

TEST_CASE("square case q matches coefficient-level differentiation") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        // p = x^2 (1-x)^2 r(x), r cubic
        std::vector<double> r(4);
        for (auto& v : r) v = u(rng);
        std::vector<double> c(8, 0.0);
        const double base[5] = {0, 0, 1, -2, 1};
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 4; ++j) c[i + j] += base[i] * r[j];
        const auto p = CompactCoeff::from_monomial(1.0, {{0.0, 1.0, c}});
        auto poly = [&](const std::vector<double>& a, double x) {
            double s = 0;
            for (int j = int(a.size()) - 1; j >= 0; --j) s = s * x + a[j];
            return s;
        };
        std::vector<double> d2(6);
        for (int j = 2; j < 8; ++j) d2[j - 2] = j * (j - 1) * c[j];
        auto ref = [&](double x) { return poly(d2, x) + std::pow(poly(c, x), 2); };
        const auto q = square_case_q(p);
        auto test_fn = [](double x) { return std::sin(3 * x) + x; };
        const double lhs = quad([&](double x) { return q(x) * test_fn(x); }, 0, 1);
        const double rhs = quad([&](double x) { return ref(x) * test_fn(x); }, 0, 1);
        CHECK(std::abs(lhs - rhs) < 1e-12);
    }
}

TEST_CASE("square case is linear in p'' and quadratic in p") {
    const auto phi = CompactCoeff::from_monomial(1.0, {{0.0, 1.0, {0, 0, 1, -2, 1}}});
    const auto d2 = phi.derivative().derivative();
    for (double c : {0.5, -2.0, 3.0}) {
        const auto q = square_case_q(CompactCoeff::from_monomial(1.0, {{0.0, 1.0, {0, 0, c, -2 * c, c}}}));
        for (int i = 0; i <= 20; ++i) {
            const double x = i / 20.0;
            CHECK(std::abs(q(x) - c * d2(x) - c * c * phi(x) * phi(x)) < 1e-12);
        }
    }
}
