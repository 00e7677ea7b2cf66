#include "beamres/traces.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "beamres/errors.hpp"
#include "beamres/quadrature.hpp"

namespace beamres {

namespace {
constexpr cd I{0.0, 1.0};

// log((1 - k/z) e^{k/z}) summed with multiplicity
cd product_log(const std::vector<Zero>& zeros, double radius, cd k) {
    cd s = 0.0;
    for (const auto& z : zeros)
        if (std::abs(z.k) < radius) s += double(z.multiplicity) * (std::log(1.0 - k / z.k) + k / z.k);
    return s;
}

int zeros_inside(const std::vector<Zero>& zeros, double radius) {
    int n = 0;
    for (const auto& z : zeros)
        if (std::abs(z.k) < radius) n += z.multiplicity;
    return n;
}

double mean_log_abs(const CoeffPair& c, double rho, const DetOptions& o) {
    double s = 0.0;
    const int n = 16;
    for (int j = 0; j < n; ++j) s += det_D(c, std::polar(rho, 2 * M_PI * (j + 0.5) / n), o).log_value.real();
    return s / n;
}
}  // namespace

HadamardData hadamard_fit(const CoeffPair& c, const std::vector<Zero>& zeros, double radius,
                          const HadamardOptions& o) {
    HadamardData h;
    h.radius = radius;
    h.gamma = c.gamma;
    for (const auto& z : zeros)
        if (std::abs(z.k) < radius) h.zeros.push_back(z);
    if (c.is_free()) return h;
    const double kmin = k_min(c.gamma);
    if (!(radius > 8 * kmin)) throw InputError("Hadamard radius too small");

    if (o.check_count) {
        const double rho0 = std::max(1e-2, 2 * kmin);
        auto outer = phase_change(c, [&](double t) { return std::polar(radius, t); }, 0.0, 2 * M_PI, o.winding);
        auto inner = phase_change(c, [&](double t) { return std::polar(rho0, t); }, 0.0, 2 * M_PI, o.winding);
        const int w = static_cast<int>(std::lround((outer.delta - inner.delta) / (2 * M_PI)));
        const int have = zeros_inside(zeros, radius);
        if (w != have) {
            std::ostringstream os;
            os << "winding inside |k| < " << radius << " is " << w << " but " << have << " zeros were supplied";
            throw IncompleteZeroSet(os.str());
        }
    }

    // pole order at 0 from the slope of log|D| between 2 k_min and 4 k_min
    const double slope = (mean_log_abs(c, 4 * kmin, o.det) - mean_log_abs(c, 2 * kmin, o.det)) / std::log(2.0);
    h.m = std::clamp(static_cast<int>(std::lround(-slope)), 0, 1);

    // log alpha, beta from the first two Taylor coefficients of the zero-free remainder
    const double rho = radius / 2;
    const int M = std::max(o.fit_samples, 16);
    std::vector<cd> L(M);
    for (int j = 0; j < M; ++j) {
        const cd k = std::polar(rho, 2 * M_PI * j / M);
        L[j] = det_D(c, k, o.det).log_value + double(h.m) * std::log(k) - product_log(h.zeros, radius, k);
    }
    for (int j = 1; j < M; ++j) {
        const double d = L[j].imag() - L[j - 1].imag();
        L[j] -= I * (2 * M_PI * std::round(d / (2 * M_PI)));
    }
    const double turn = L[M - 1].imag() - L[0].imag() + std::remainder(L[0].imag() - L[M - 1].imag(), 2 * M_PI);
    if (std::abs(turn) > M_PI) {
        std::ostringstream os;
        os << "remainder winds on |k| = " << rho << "; the zero list is incomplete";
        throw IncompleteZeroSet(os.str());
    }
    cd c0 = 0.0, c1 = 0.0;
    for (int j = 0; j < M; ++j) {
        const double th = 2 * M_PI * j / M;
        c0 += L[j];
        c1 += L[j] * std::polar(1.0, -th);
    }
    c0 /= double(M);
    c1 /= double(M) * rho;
    h.alpha = std::exp(c0);
    h.beta = c1;
    h.beta_type = c1;
    for (const auto& z : h.zeros) h.beta_type += double(z.multiplicity) / z.k;
    return h;
}

cd hadamard_log(const HadamardData& h, cd k) {
    return std::log(h.alpha) - double(h.m) * std::log(k) + h.beta * k + product_log(h.zeros, h.radius, k);
}

double hadamard_residual(const CoeffPair& c, const HadamardData& h, double rho, int samples, const DetOptions& opts) {
    DetOptions o = opts;
    o.allow_unconverged = true;
    double worst = 0.0;
    for (int j = 0; j < samples; ++j) {
        const cd k = std::polar(rho, 2 * M_PI * (j + 0.25) / samples);
        const cd d = det_D(c, k, o).log_value - hadamard_log(h, k);
        worst = std::max(worst, std::abs(std::exp(d) - 1.0));
    }
    return worst;
}

cd trace_lhs(const CoeffPair& c, cd k, const DetOptions& opts) {
    check_k(k, k_min(c.gamma));
    if (c.is_free()) return 0.0;
    DetOptions o = opts;
    o.allow_unconverged = true;  // only the grid is taken from here
    const auto s = det_D(c, k, o);
    const double h = 1e-5 * (1.0 + std::abs(k));
    const cd lp = log_det_at(c, k + h, s.order, s.route, opts.extrapolate);
    const cd lm = log_det_at(c, k - h, s.order, s.route, opts.extrapolate);
    cd d = lp - lm;
    d.imag(std::remainder(d.imag(), 2 * M_PI));
    // a zero within a few steps of k spoils the central difference: |D| / |D'| < 10 h
    if (std::abs(std::exp(lp - s.log_value) - std::exp(lm - s.log_value)) > 0.2)
        throw SingularAtResonance("k is at a zero of D");
    return k * d / (2.0 * h);
}

cd trace_lhs_matrix(const CoeffPair& c, cd k, int order) {
    check_k(k, k_min(c.gamma));
    if (c.is_free()) return 0.0;
    const auto quad = Quadrature::composite(c.breakpoints(), order);
    const double h = 1e-5 * (1.0 + std::abs(k));
    const auto b = build_Y0(c, k, quad);
    const Eigen::MatrixXcd dY = (build_Y0(c, k + h, quad).Y - build_Y0(c, k - h, quad).Y) / cd(2.0 * h);
    const Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(b.side(), b.side()) + b.Y;
    return k * A.partialPivLu().solve(dY).trace();
}

TraceRhs trace_rhs(const HadamardData& h, cd k) {
    TraceRhs r;
    cd s = 0.0;
    for (const auto& z : h.zeros) {
        if (std::abs(z.k) >= h.radius) continue;
        s += double(z.multiplicity) / (z.k * (k - z.k));
        r.terms += z.multiplicity;
    }
    r.value = -double(h.m) + h.beta * k + k * k * s;
    // zeros beyond the radius: density 4 gamma / pi per unit |k| on the seed lattice
    if (h.radius > 0) r.tail_bound = std::norm(k) * 4.0 * h.gamma / (M_PI * std::max(h.radius - std::abs(k), 1e-300));
    return r;
}

cd phase_derivative_rhs(const HadamardData& h, double k) {
    cd s = (1.0 - I) * h.beta;
    for (const auto& z : h.zeros) {
        if (std::abs(z.k) >= h.radius) continue;
        s += double(z.multiplicity) * (k / z.k) * (1.0 / (I * k - z.k) + 1.0 / (k - z.k));
    }
    return s / (2.0 * M_PI * I);
}

double phase_derivative_fd(const CoeffPair& c, double k, const DetOptions& opts) {
    // -2 pi i phi' = i D'(ik)/D(ik) - D'(k)/D(k)
    const cd v = (trace_lhs(c, I * k, opts) - trace_lhs(c, cd(k), opts)) / k;
    return (I * v / (2.0 * M_PI)).real();
}

}  // namespace beamres
