// One PASS/FAIL line per acceptance criterion; nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "beamres/oracle.hpp"
#include "beamres/rootfind.hpp"
#include "beamres/scattering.hpp"
#include "beamres/traces.hpp"
#include "beamres/verify.hpp"

using namespace beamres;

namespace {

constexpr cd I{0.0, 1.0};

CompactCoeff zero1() { return CompactCoeff::zero(1.0); }
CoeffPair step_pair() { return {CompactCoeff::step(2.0, 0.0, 1.0, 1.0), zero1()}; }
// c x^2 (1-x)^2
CompactCoeff bump(double c) { return CompactCoeff::from_monomial(1.0, {{0.0, 1.0, {0, 0, c, -2 * c, c}}}); }
// c x^2 (1-x)^4
CompactCoeff beam_bump(double c) {
    return CompactCoeff::from_monomial(1.0, {{0.0, 1.0, {0, 0, c, -4 * c, 6 * c, -4 * c, c}}});
}

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

int failures = 0;

void run(int id, const char* name, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::printf("%s %2d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), s);
    std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main() {
    std::mt19937_64 rng(20261019);
    std::uniform_real_distribution<double> u(0.0, 1.0);

    run(1, "free determinant", [&] {
        const auto t0 = std::chrono::steady_clock::now();
        const CoeffPair c(zero1(), zero1());
        double worst = 0;
        for (int i = 0; i < 100; ++i) {
            const cd k = std::polar(1.0 + 19.0 * (i % 10) / 9.0, 2 * M_PI * (i + 0.5) / 100);
            worst = std::max(worst, std::abs(det_D(c, k).value - 1.0));
        }
        const double t = seconds_since(t0);
        return Outcome{worst < 1e-12 && t < 5, fmt("max |D-1| = %.3g over 100 points, %.2f s", worst, t)};
    });

    run(2, "conjugate symmetry", [&] {
        const auto t0 = std::chrono::steady_clock::now();
        const CoeffPair c(bump(12.0), CompactCoeff::step(-1.5, 0.0, 1.0, 1.0));
        std::vector<cd> ks;
        for (int i = 0; i < 50; ++i) ks.push_back(std::polar(1.0 + 19.0 * u(rng), 2 * M_PI * u(rng)));
        const auto r = symmetry_check(c, ks);
        const double t = seconds_since(t0);
        return Outcome{r.max_residual < 1e-9 && t < 30, fmt("max relative deviation %.3g, %.1f s", r.max_residual, t)};
    });

    run(3, "Jost factorization of the squared case", [&] {
        const auto t0 = std::chrono::steady_clock::now();
        const auto p = bump(12.0);
        const CoeffPair c(p, square_case_q(p));
        DetOptions o;
        o.max_order = 256;
        o.allow_unconverged = true;  // the order cap is the point; accuracy is judged by the oracle
        double worst = 0;
        int max_n = 0;
        for (int quad = 0; quad < 4; ++quad)
            for (int i = 0; i < 20; ++i) {
                const cd k = std::polar(0.5 + 7.5 * u(rng), (quad + 0.02 + 0.96 * u(rng)) * M_PI / 2);
                const auto s = det_D(c, k, o);
                const cd ref = oracle_D(p, k);
                worst = std::max(worst, std::abs(s.value - ref) / std::abs(ref));
                max_n = std::max(max_n, s.order);
            }
        const double t = seconds_since(t0);
        return Outcome{worst < 1e-6 && max_n <= 256 && t < 120,
                       fmt("max relative error %.3g on 80 points, order <= %d, %.1f s", worst, max_n, t)};
    });

    run(4, "high-k coefficient", [&] {
        const auto c = step_pair();
        const auto r = log_det_asymptotic_check(c, 50.0);
        return Outcome{r.deviation < 0.05, fmt("fitted %.5f%+.5fi vs %.5f%+.5fi, deviation %.4f", r.fitted.real(),
                                               r.fitted.imag(), r.expected.real(), r.expected.imag(), r.deviation)};
    });

    run(5, "one resonance per seed disc", [&] {
        const auto t0 = std::chrono::steady_clock::now();
        const auto c = step_pair();
        bool ok = true;
        double d5 = 0, d12 = 0, worst = 0;
        for (const auto& s : asymptotic_seeds(c.p_plus, c.gamma, 5, 12)) {
            const int w = winding_number(c, s.k_plus, M_PI / 4).winding;
            const auto z = newton_zero(c, s.k_plus);
            const double d = std::abs(z.k - s.k_plus);
            ok = ok && w == 1 && z.converged && d < M_PI / 4;
            worst = std::max(worst, d);
            if (s.n == 5) d5 = d;
            if (s.n == 12) d12 = d;
        }
        const double t = seconds_since(t0);
        return Outcome{ok && worst < 0.6 && d12 < d5 && t < 300,
                       fmt("windings and Newton %s, max deviation %.4f, n=5 %.4f, n=12 %.4f, %.1f s",
                           ok ? "ok" : "failed", worst, d5, d12, t)};
    });

    run(6, "quadrant counts", [&] {
        const auto c = step_pair();
        const double r = 30 * M_PI / c.gamma;
        const auto row = counting_function(c, {r}).front();
        const double ratio = double(row.N3) / row.N2, bound = 1.2 * 4 * c.gamma * r / M_PI;
        return Outcome{ratio >= 1.7 && ratio <= 2.3 && row.N <= bound && row.N == row.full_circle,
                       fmt("N1..N4 = %d %d %d %d, N3/N2 = %.3f, N = %d <= %.1f, full circle %d", row.N1, row.N2,
                           row.N3, row.N4, ratio, row.N, bound, row.full_circle)};
    });

    run(7, "continuation identities", [&] {
        double s_res = 0, o_res = 0;
        for (const auto& c : {step_pair(), CoeffPair(bump(12.0), CompactCoeff::step(-1.5, 0.0, 1.0, 1.0))}) {
            std::vector<double> ks;
            for (int k = 1; k <= 8; ++k) ks.push_back(k);
            std::vector<cd> q1;
            for (int i = 0; i < 10; ++i) q1.push_back(std::polar(1.0 + 7.0 * u(rng), 0.05 + 1.47 * u(rng)));
            s_res = std::max(s_res, s_identity_check(c, ks).max_residual);
            o_res = std::max(o_res, omega_identity_check(c, q1).max_residual);
        }
        return Outcome{s_res < 1e-7 && o_res < 1e-7, fmt("D(ik) = D(k) S(k): %.3g, D(-k) = D(k) det Omega(k): %.3g", s_res, o_res)};
    });

    run(8, "trace formula", [&] {
        const auto c = step_pair();
        const auto zeros = resonances_in_disc(c, 30.0 / c.gamma).set.zeros;
        const cd k = std::polar(2.0 / c.gamma, M_PI / 4);
        const cd lhs = trace_lhs(c, k);
        const auto h15 = hadamard_fit(c, zeros, 15.0 / c.gamma), h30 = hadamard_fit(c, zeros, 30.0 / c.gamma);
        const double e15 = std::abs(lhs - trace_rhs(h15, k).value), e30 = std::abs(lhs - trace_rhs(h30, k).value);
        const double cap = 0.2 * std::abs(lhs);
        return Outcome{e30 < e15 && e15 < cap && e30 < cap,
                       fmt("|lhs| = %.5f, residual %.4g (R=15) and %.4g (R=30), %zu zeros", std::abs(lhs), e15, e30,
                           zeros.size())};
    });

    run(9, "unitarity", [&] {
        const CoeffPair c(bump(12.0), CompactCoeff::step(-1.5, 0.0, 1.0, 1.0));
        std::vector<double> ks;
        for (int i = 0; i < 50; ++i) ks.push_back(0.5 + 19.5 * u(rng));
        const auto a = unitarity_check(c, ks), b = unitarity_check(step_pair(), ks);
        const double worst = std::max(a.max_residual, b.max_residual);
        return Outcome{worst < 1e-8, fmt("max ||S| - 1| = %.3g on 50 real k", worst)};
    });

    run(10, "Borg indicator", [&] {
        const BeamCoeffs id{zero1(), zero1()};
        const auto d0 = liouville_data(id);
        const BeamCoeffs bumped{beam_bump(20.0), beam_bump(10.0)};
        const auto d1 = liouville_data(bumped);
        double dev0 = 0, dev1 = 0;
        for (int j = 0; j <= 16; ++j) {
            const double th = 0.5 * M_PI * j / 16;
            dev0 = std::max(dev0, std::abs(det_D(d0.pq, std::polar(2.0, th)).value - 1.0));
            dev1 = std::max(dev1, std::abs(det_D(d1.pq, std::polar(2.0 / d1.pq.gamma, th)).value - 1.0));
        }
        const double k0 = kappa_integral(id), k1 = kappa_integral(bumped);
        return Outcome{k0 == 0.0 && dev0 < 1e-10 && k1 > 1e-4 && dev1 > 1e-3,
                       fmt("identity: int kappa = %.3g, max |D-1| = %.3g; bump: int kappa = %.4g, max |D-1| = %.4g", k0,
                           dev0, k1, dev1)};
    });

    run(11, "closed-form trace", [&] {
        const CoeffPair c(bump(12.0), CompactCoeff::from_monomial(1.0, {{0.0, 1.0, {1.5, 3, -3}}}));
        std::vector<cd> ks;
        for (int i = 0; i < 10; ++i) ks.push_back(std::polar(0.5 + 19.5 * u(rng), 0.5 * M_PI * u(rng)));
        const auto r = trace_check(c, ks);
        return Outcome{r.max_residual < 1e-8, fmt("max relative error %.3g at 10 points", r.max_residual)};
    });

    std::printf("%d of 11 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
