#include <cmath>
#include <random>

#include "doctest.h"

#include "beamres/errors.hpp"
#include "beamres/fredholm.hpp"
#include "beamres/oracle.hpp"

using namespace beamres;

namespace {

constexpr cd I{0.0, 1.0};

CompactCoeff bump(double c) { return CompactCoeff::from_monomial(1.0, {{0.0, 1.0, {0, 0, c, -2 * c, c}}}); }
CompactCoeff quadratic(double c) { return CompactCoeff::from_monomial(1.0, {{0.0, 1.0, {0.5 * c, c, -c}}}); }

CoeffPair smooth_pair() { return {bump(12.0), quadratic(3.0)}; }

double rel(cd a, cd b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("Gauss rule integrates polynomials exactly") {
    for (int n : {4, 16, 33}) {
        const auto q = Quadrature::gauss_legendre(n, 0.0, 1.7);
        for (int j = 0; j <= 2 * n - 1; ++j) {
            double s = 0;
            for (std::size_t i = 0; i < q.size(); ++i) s += q.weights[i] * std::pow(q.nodes[i], j);
            const double ref = std::pow(1.7, j + 1) / (j + 1);
            CHECK(std::abs(s - ref) < 1e-13 * ref);
        }
        for (std::size_t i = 0; i < q.size(); ++i) {
            CHECK(q.nodes[i] > 0.0);
            CHECK(q.nodes[i] < 1.7);
            CHECK(q.weights[i] > 0.0);
            if (i) CHECK(q.nodes[i] > q.nodes[i - 1]);
        }
    }
}

TEST_CASE("composite rule respects breakpoints") {
    const auto q = Quadrature::composite({0.0, 0.3, 1.0}, 32);
    CHECK(q.size() == 64);
    double left = 0;
    for (std::size_t i = 0; i < q.size(); ++i)
        if (q.nodes[i] < 0.3) left += q.weights[i];
    CHECK(std::abs(left - 0.3) < 1e-14);
}

TEST_CASE("free determinant is exactly one") {
    const CoeffPair free(CompactCoeff::zero(1.0), CompactCoeff::zero(1.0));
    const auto b = build_Y0(free, {2.0, 1.0}, Quadrature::composite(free.breakpoints(), 16));
    CHECK(b.Y.size() == 0);
    for (cd k : {cd(1, 0), cd(-3, 2), cd(0.5, -7), cd(-10, -10)}) CHECK(det_D(free, k).value == cd(1.0, 0.0));
}

TEST_CASE("blocks follow the coefficients present") {
    const CoeffPair ponly(bump(12.0), CompactCoeff::zero(1.0));
    const auto quad = Quadrature::composite(ponly.breakpoints(), 16);
    const auto b = build_Y0(ponly, {2.0, 1.0}, quad);
    CHECK(b.has_p);
    CHECK_FALSE(b.has_q);
    CHECK(b.side() == b.n());
    const CoeffPair both = smooth_pair();
    const auto b2 = build_Y0(both, {2.0, 1.0}, quad);
    CHECK(b2.side() == 2 * b2.n());
    // the p-block does not depend on q
    CHECK((b2.Y.topLeftCorner(b.n(), b.n()) - b.Y).norm() < 1e-14 * b.Y.norm());
}

TEST_CASE("matrix trace matches the closed form") {
    const auto c = smooth_pair();
    const auto quad = Quadrature::composite(c.breakpoints(), 64);
    for (cd k : {cd(3, 2), cd(1, 0.5), cd(6, 1)}) {
        const cd t = trace_matrix(build_Y0(c, k, quad));
        CHECK(rel(t, trace_Y0_closed(c, k)) < 1e-8);
    }
    CHECK(trace_Y0_closed(CoeffPair(CompactCoeff::zero(1.0), CompactCoeff::zero(1.0)), {3, 2}) == cd(0, 0));
}

TEST_CASE("closed-form trace on the imaginary axis") {
    const CoeffPair c(bump(12.0), CompactCoeff::zero(1.0));
    for (double t : {200.0, 800.0}) {
        const cd k = I * t;
        const cd lead = -(1.0 + I) * c.p0 / (2.0 * k);
        CHECK(rel(trace_Y0_closed(c, k), lead) < 20.0 / t);
    }
}

TEST_CASE("weight splitting does not change the determinant") {
    const auto c = smooth_pair();
    const auto quad = Quadrature::composite(c.breakpoints(), 32);
    const cd k{2.0, 1.5};
    const auto b = build_Y0(c, k, quad);
    // (w_i, 1) splitting is the similarity W^{1/2} Y W^{-1/2}
    Eigen::VectorXd s(b.side());
    for (int i = 0; i < b.side(); ++i) s[i] = b.sw[i % b.n()];
    const Eigen::MatrixXcd Y2 = s.asDiagonal() * b.Y * s.cwiseInverse().asDiagonal();
    const auto Id = Eigen::MatrixXcd::Identity(b.side(), b.side());
    const cd d1 = std::exp(log_det(Id + b.Y)), d2 = std::exp(log_det(Id + Y2));
    CHECK(rel(d2, d1) < 1e-12);
}

TEST_CASE("conjugate symmetry on random points") {
    const CoeffPair c(bump(12.0), CompactCoeff::step(-1.5, 0.0, 1.0, 1.0));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const cd k = std::polar(1.0 + 19.0 * u(rng), 2 * M_PI * u(rng));
        const cd a = det_D(c, k).value, b = std::conj(det_D(c, I * std::conj(k)).value);
        CHECK(rel(b, a) < 1e-9);
    }
}

TEST_CASE("squared case factorizes through the Jost function") {
    const auto p = bump(12.0);
    const CoeffPair c(p, square_case_q(p));
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        const cd k = std::polar(0.5 + 9.5 * u(rng), 0.5 * M_PI * u(rng));
        CHECK(rel(det_D(c, k).value, oracle_D(p, k)) < 1e-6);
    }
}

TEST_CASE("error estimate shrinks as the order doubles") {
    const auto c = smooth_pair();
    const cd k{4.0, 2.0};
    double prev = INFINITY;
    cd last = log_det_at(c, k, 8, Route::Direct, false);
    for (int n : {16, 32, 64, 128}) {
        const cd cur = log_det_at(c, k, n, Route::Direct, false);
        const double e = std::abs(cur - last);
        CHECK(e < prev);
        prev = e;
        last = cur;
    }
}

TEST_CASE("stored error estimate bounds the next doubling") {
    const auto c = smooth_pair();
    const cd k{3.0, 1.0};
    DetOptions o;
    o.extrapolate = false;
    o.tol = 1e-6;
    const auto s = det_D(c, k, o);
    CHECK(s.err_est >= 0.0);
    const cd next = std::exp(log_det_at(c, k, 2 * s.order, Route::Direct, false));
    CHECK(std::abs(next - s.value) <= 2 * s.err_est + 1e-15);
}

TEST_CASE("determinant is real on the diagonal ray") {
    const auto c = smooth_pair();
    for (double rho = 1.0; rho <= 30.0; rho += 1.0) {
        const cd D = det_D(c, std::polar(rho, M_PI / 4)).value;
        CHECK(std::abs(D.imag()) < 1e-10 * (1 + std::abs(D)));
    }
}

TEST_CASE("growth is bounded by the support length") {
    const CoeffPair c(CompactCoeff::step(2.0, 0.0, 1.0, 1.0), CompactCoeff::zero(1.0));
    // log|D| - 2 gamma ((Re k)_- + (Im k)_-) against log|k| on three circles
    std::vector<double> excess;
    for (double r : {4.0, 8.0, 16.0}) {
        double worst = -INFINITY;
        for (int j = 0; j < 64; ++j) {
            const cd k = std::polar(r, 2 * M_PI * (j + 0.5) / 64);
            const double g = 2 * c.gamma * (std::max(-k.real(), 0.0) + std::max(-k.imag(), 0.0));
            worst = std::max(worst, std::log(std::abs(det_D(c, k, {.tol = 1e-8}).value)) - g);
        }
        excess.push_back(worst);
    }
    // fitted C from the outer two circles, and the inner circle under the same line
    const double C = (excess[2] - excess[1]) / std::log(2.0);
    CHECK(C < 4.0);
    CHECK(excess[2] < excess[0] + 4.0 * std::log(4.0));
}

TEST_CASE("high-k coefficient") {
    const CoeffPair free(CompactCoeff::zero(1.0), CompactCoeff::zero(1.0));
    CHECK(std::abs(log_det_asymptotic_check(free, 50.0).fitted) == 0.0);
    const CoeffPair step(CompactCoeff::step(1.0, 0.0, 1.0, 1.0), CompactCoeff::zero(1.0));
    const auto r = log_det_asymptotic_check(step, 50.0);
    CHECK(r.deviation < 0.05);
    CHECK_THROWS_AS(log_det_asymptotic_check(step, 5.0), InputError);
}

TEST_CASE("high-k coefficient of a transformed beam") {
    auto b = [](double c) {
        return CompactCoeff::from_monomial(1.0, {{0.0, 1.0, {0, 0, c, -4 * c, 6 * c, -4 * c, c}}});
    };
    const BeamCoeffs beam{b(20.0), b(10.0)};
    const auto d = liouville_data(beam);
    const double p0 = -0.5 * d.kappa.integral();
    // a 5% fit needs only a few digits of D
    const auto r = log_det_asymptotic_check(d.pq, 50.0 / d.pq.gamma, 33, {.tol = 1e-6});
    CHECK(std::abs(r.fitted + (1.0 + I) * p0 / 2.0) < 0.05 * std::abs((1.0 + I) * p0 / 2.0));
}

TEST_CASE("small k is rejected") {
    const auto c = smooth_pair();
    CHECK_THROWS_AS(det_D(c, {1e-5, 0.0}), KTooSmall);
}
