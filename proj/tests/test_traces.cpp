#include <cmath>

#include "doctest.h"

#include "beamres/errors.hpp"
#include "beamres/scattering.hpp"
#include "beamres/traces.hpp"

using namespace beamres;

namespace {

constexpr cd I{0.0, 1.0};

CoeffPair step_pair() { return {CompactCoeff::step(2.0, 0.0, 1.0, 1.0), CompactCoeff::zero(1.0)}; }
CoeffPair smooth_pair() {
    return {CompactCoeff::from_monomial(1.0, {{0.0, 1.0, {0, 0, 12, -24, 12}}}),
            CompactCoeff::from_monomial(1.0, {{0.0, 1.0, {1.5, 3, -3}}})};
}

struct Fits {
    std::vector<Zero> zeros;
    HadamardData h15, h30;
};

const Fits& fits() {
    static const Fits f = [] {
        Fits r;
        const auto c = step_pair();
        r.zeros = resonances_in_disc(c, 30.0).set.zeros;
        r.h15 = hadamard_fit(c, r.zeros, 15.0);
        r.h30 = hadamard_fit(c, r.zeros, 30.0);
        return r;
    }();
    return f;
}

// Taylor coefficients of k D(k) from a small circle: k D = c0 + c1 k + ...
std::pair<cd, cd> taylor_kD(const CoeffPair& c, double rho) {
    const int n = 32;
    cd c0 = 0, c1 = 0;
    for (int j = 0; j < n; ++j) {
        const cd k = std::polar(rho, 2 * M_PI * (j + 0.5) / n);
        const cd v = k * det_D(c, k).value;
        c0 += v;
        c1 += v / k;
    }
    return {c0 / double(n), c1 / double(n)};
}

}  // namespace

TEST_CASE("free Hadamard data") {
    const CoeffPair c(CompactCoeff::zero(1.0), CompactCoeff::zero(1.0));
    const auto h = hadamard_fit(c, {}, 10.0);
    CHECK(h.m == 0);
    CHECK(std::abs(h.alpha - 1.0) < 1e-14);
    CHECK(std::abs(h.beta) < 1e-14);
    CHECK(trace_lhs(c, {2, 2}) == cd(0, 0));
    CHECK(trace_rhs(h, {2, 2}).value == cd(0, 0));
}

TEST_CASE("log-derivative agrees with the solve-based trace") {
    const auto c = smooth_pair();
    const cd k{3.0, 3.0};
    // the solve-based trace carries the same h^2 grid error, removed by one Richardson step
    const cd b = (4.0 * trace_lhs_matrix(c, k, 512) - trace_lhs_matrix(c, k, 256)) / 3.0;
    const cd a = trace_lhs(c, k);
    CHECK(std::abs(a - b) < 1e-6 * std::abs(b));
}

TEST_CASE("log-derivative at large k") {
    const auto c = smooth_pair();
    for (double r : {40.0, 80.0}) {
        const cd k = std::polar(r, M_PI / 4);
        const cd lead = (1.0 + I) * c.p0 / (2.0 * k);
        CHECK(std::abs(trace_lhs(c, k) - lead) < 0.1 * std::abs(lead));
    }
}

TEST_CASE("Hadamard data of the step") {
    const auto& f = fits();
    const auto c = step_pair();
    const auto [c0, c1] = taylor_kD(c, 0.2);
    for (const auto* h : {&f.h15, &f.h30}) {
        CHECK(h->m == 1);
        CHECK(std::abs(h->alpha - c0) < 1e-6 * std::abs(c0));
        CHECK(std::abs(h->beta - c1 / c0) < 1e-4 * std::abs(c1 / c0));
    }
    // k D(k) -> -(1 + i) c sin(sqrt(2c)) / sqrt(2c) for a step of height c on [0, 1]
    CHECK(std::abs(f.h30.alpha + (1.0 + I) * std::sin(2.0)) < 1e-6);
    const cd type = cd(-1.0, 1.0) * c.gamma;
    CHECK(std::abs(f.h30.beta_type - type) < 0.1 * std::abs(type));
    CHECK(std::abs(f.h30.beta_type - type) < std::abs(f.h15.beta_type - type) + 0.05);
}

TEST_CASE("Hadamard product converges on a fixed circle") {
    const auto& f = fits();
    const auto c = step_pair();
    DetOptions o;
    o.tol = 1e-8;
    const double r15 = hadamard_residual(c, f.h15, 5.0, 64, o);
    const double r30 = hadamard_residual(c, f.h30, 5.0, 64, o);
    CHECK(r30 < r15);
    CHECK(r30 < 0.05);
}

TEST_CASE("trace identity improves with the truncation radius") {
    const auto& f = fits();
    const auto c = step_pair();
    const cd k = std::polar(2.0, M_PI / 4);
    const cd lhs = trace_lhs(c, k);
    const auto r15 = trace_rhs(f.h15, k), r30 = trace_rhs(f.h30, k);
    const double e15 = std::abs(lhs - r15.value), e30 = std::abs(lhs - r30.value);
    CHECK(e30 < e15);
    CHECK(e15 < 0.2 * std::abs(lhs));
    CHECK(e30 <= r30.tail_bound);
    CHECK(r30.terms > r15.terms);
}

TEST_CASE("right-hand side respects the reflection") {
    const auto& f = fits();
    auto h = f.h15;
    for (auto& z : h.zeros) z.k = I * std::conj(z.k);
    h.beta = -I * std::conj(h.beta);
    for (cd k : {cd(2, 1), cd(0.5, 3)}) {
        const cd a = trace_rhs(f.h15, k).value, b = trace_rhs(h, I * std::conj(k)).value;
        CHECK(std::abs(b - std::conj(a)) < 1e-12 * (1 + std::abs(a)));
    }
}

TEST_CASE("scattering phase derivative from the zeros") {
    const auto& f = fits();
    const auto c = step_pair();
    std::vector<double> ks;
    for (int i = 0; i <= 300; ++i) ks.push_back(1.5 + 4.0 * i / 300);
    const auto ph = scattering_phase(c, ks);
    for (int i = 25; i <= 275; i += 25) {
        const double fd = (ph.phi[i + 1] - ph.phi[i - 1]) / (ks[i + 1] - ks[i - 1]);
        const double rhs = phase_derivative_rhs(f.h30, ks[i]).real();
        CHECK(std::abs(rhs - fd) < 0.1 * std::abs(fd));
        CHECK(std::abs(phase_derivative_fd(c, ks[i]) - fd) < 1e-3 * std::abs(fd));
    }
}

TEST_CASE("errors") {
    const auto& f = fits();
    const auto c = step_pair();
    CHECK_THROWS_AS(trace_lhs(c, f.zeros.front().k), SingularAtResonance);
    auto partial = f.zeros;
    partial.pop_back();
    CHECK_THROWS_AS(hadamard_fit(c, partial, 30.0), IncompleteZeroSet);
}
