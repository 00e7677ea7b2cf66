#include "beamres/fredholm.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "beamres/errors.hpp"
#include "beamres/integrate.hpp"
#include "beamres/scattering.hpp"
#include "nystrom_internal.hpp"

namespace beamres {

namespace {
constexpr cd I{0.0, 1.0};

double signed_sqrt(double v) { return v >= 0 ? std::sqrt(v) : -std::sqrt(-v); }

double growth(const CoeffPair& c, cd k) {
    return c.gamma * std::max({0.0, -k.real(), -k.imag()});
}

double longest_piece(const CoeffPair& c) {
    auto br = c.breakpoints();
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < br.size(); ++i) m = std::max(m, br[i + 1] - br[i]);
    return m;
}

int round_up16(double v) { return 16 * static_cast<int>(std::ceil(v / 16.0)); }
}  // namespace

NystromBlock build_Y0(const CoeffPair& c, cd k, const Quadrature& quad) {
    check_k(k, k_min(c.gamma));
    NystromBlock b;
    b.k = k;
    b.has_p = !c.p.is_zero();
    b.has_q = !c.q.is_zero();
    const int n = static_cast<int>(quad.size());
    b.x.resize(n);
    b.sw.resize(n);
    b.L1.setZero(n);
    b.R1.setZero(n);
    b.L2.setZero(n);
    b.R2.setZero(n);
    for (int i = 0; i < n; ++i) {
        const double x = quad.nodes[i];
        b.x[i] = x;
        b.sw[i] = std::sqrt(quad.weights[i]);
        const double P = 2.0 * c.p(x), Q = c.q(x);
        b.L1[i] = signed_sqrt(P);
        b.R1[i] = std::sqrt(std::abs(P));
        b.L2[i] = signed_sqrt(Q);
        b.R2[i] = std::sqrt(std::abs(Q));
    }
    const int side = n * (int(b.has_p) + int(b.has_q));
    b.Y.setZero(side, side);
    if (side == 0) return b;

    const bool factorized = std::abs(k) * c.gamma < 300.0;
    Eigen::VectorXcd ex(n), em(n);
    for (int i = 0; i < n; ++i) {
        ex[i] = std::exp(I * k * b.x[i]);
        em[i] = std::exp(-k * b.x[i]);
    }
    const cd f11 = -1.0 / (4.0 * k), f12 = -1.0 / (4.0 * k * k), f22 = I / (4.0 * k * k * k);
    const int qo = b.q_offset();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double xi = b.x[i], xj = b.x[j];
            const double s = (xi > xj) - (xi < xj);
            cd e1, e2, e3, e4;
            if (factorized) {
                const bool up = xi >= xj;
                e1 = up ? ex[i] / ex[j] : ex[j] / ex[i];
                e3 = up ? em[i] / em[j] : em[j] / em[i];
                e2 = ex[i] * ex[j];
                e4 = em[i] * em[j];
            } else {
                const double d = std::abs(xi - xj), sum = xi + xj;
                e1 = std::exp(I * k * d);
                e2 = std::exp(I * k * sum);
                e3 = std::exp(-k * d);
                e4 = std::exp(-k * sum);
            }
            const double wi = b.sw[i], wj = b.sw[j];
            if (b.has_p) {
                b.Y(i, j) = wi * b.L1[i] * (f11 * (I * e1 + I * e2 + e3 + e4)) * b.R1[j] * wj;
            }
            if (b.has_q) {
                b.Y(qo + i, qo + j) = wi * b.L2[i] * (f22 * (e1 - e2 + I * e3 - I * e4)) * b.R2[j] * wj;
            }
            if (b.has_p && b.has_q) {
                b.Y(i, qo + j) = wi * b.L1[i] * (f12 * (s * e1 - e2 - s * e3 + e4)) * b.R2[j] * wj;
                b.Y(qo + i, j) = wi * b.L2[i] * (-f12 * (-s * e1 - e2 + s * e3 + e4)) * b.R1[j] * wj;
            }
        }
    }
    return b;
}

cd log_det(const Eigen::MatrixXcd& A) {
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    const auto& U = lu.matrixLU();
    cd acc = 0.0;
    for (int i = 0; i < U.rows(); ++i) acc += std::log(U(i, i));
    if (lu.permutationP().determinant() < 0) acc += I * M_PI;
    return acc;
}

namespace detail {

Factored factor(const CoeffPair& c, cd k, const Quadrature& quad) {
    Factored f;
    f.b = build_Y0(c, k, quad);
    const int side = f.b.side();
    Eigen::MatrixXcd A = f.b.Y;
    A.diagonal().array() += 1.0;
    f.lu.compute(A);
    const auto& U = f.lu.matrixLU();
    cd acc = 0.0;
    for (int i = 0; i < side; ++i) acc += std::log(U(i, i));
    if (side > 0 && f.lu.permutationP().determinant() < 0) acc += I * M_PI;
    f.log_det = acc;
    return f;
}

cd contract(const Factored& f, const Eigen::VectorXcd& row, const Eigen::VectorXcd& col) {
    if (f.b.side() == 0) return 0.0;
    Eigen::VectorXcd z = f.lu.solve(col);
    return row.transpose() * (f.b.Y * z);
}

cd s_factor(const Factored& f) {
    if (f.b.side() == 0) return 1.0;
    auto psi = psi_functionals(f.b, f.b.k);
    cd a0 = psi.row.transpose() * psi.col;
    return 1.0 + c_k(f.b.k) * (a0 - contract(f, psi.row, psi.col));
}

Eigen::Matrix2cd omega_matrix(const Factored& f, const Eigen::Matrix2cd* omega0) {
    const cd k = f.b.k;
    if (f.b.side() == 0) return Eigen::Matrix2cd::Identity();
    auto pa = psi_functionals(f.b, I * k);
    auto pb = psi_functionals(f.b, k);
    const int side = f.b.side();
    Eigen::MatrixXcd R(2, side), C(side, 2);
    R.row(0) = pa.row.transpose();
    R.row(1) = pb.row.transpose();
    C.col(0) = I * pa.col;
    C.col(1) = pb.col;
    Eigen::Matrix2cd O0 = omega0 ? *omega0 : Eigen::Matrix2cd(R * C);
    Eigen::MatrixXcd Z = f.lu.solve(C);
    Eigen::Matrix2cd O1 = R * (f.b.Y * Z);
    return Eigen::Matrix2cd::Identity() + c_k(k) * (O0 - O1);
}

int quadrant(cd k) {
    const bool re = k.real() >= 0.0, im = k.imag() >= 0.0;
    if (re && im) return 1;
    if (!re && im) return 2;
    if (!re && !im) return 3;
    return 4;
}

cd richardson_log(cd coarse, cd fine, double ratio) {
    return fine + std::log((ratio - std::exp(coarse - fine)) / (ratio - 1.0));
}

double tail_estimate(double previous_step, double last_step) {
    // geometric tail once the steps shrink clearly; otherwise the last step itself
    const double q = last_step / previous_step;
    return q <= 0.125 ? last_step * q / (1.0 - q) : last_step;
}

cd romberg_log(const std::vector<cd>& levels, int eliminations) {
    // errors run in even powers of h
    std::vector<cd> col = levels;
    double ratio = 4.0;
    for (int m = 0; m < eliminations && col.size() >= 2; ++m, ratio *= 4.0) {
        std::vector<cd> next;
        for (std::size_t j = 1; j < col.size(); ++j) next.push_back(richardson_log(col[j - 1], col[j], ratio));
        col.swap(next);
    }
    return col.back();
}

}  // namespace detail

Route resolve_route(const CoeffPair& c, cd k, const DetOptions& opts) {
    if (detail::quadrant(k) == 1) return Route::Direct;
    if (opts.route != Route::Auto) return opts.route;
    return growth(c, k) <= opts.direct_limit ? Route::Direct : Route::Continued;
}

namespace {

cd level_log(const CoeffPair& c, cd k, const Quadrature& quad, Route route) {
    const int qd = detail::quadrant(k);
    if (route == Route::Direct || qd == 1) return detail::factor(c, k, quad).log_det;
    switch (qd) {
        case 2: {
            auto f = detail::factor(c, -I * k, quad);
            return f.log_det + std::log(detail::s_factor(f));
        }
        case 3: {
            auto f = detail::factor(c, -k, quad);
            return f.log_det + std::log(detail::omega_matrix(f, nullptr).determinant());
        }
        default:
            return std::conj(level_log(c, I * std::conj(k), quad, route));
    }
}

}  // namespace

cd log_det_at(const CoeffPair& c, cd k, int order, Route route, bool extrapolate) {
    check_k(k, k_min(c.gamma));
    if (c.is_free()) return 0.0;
    const auto br = c.breakpoints();
    if (!extrapolate) return level_log(c, k, Quadrature::composite(br, order), route);
    std::vector<cd> levels;
    int depth = order >= 64 ? 2 : 1;
    for (int j = depth; j >= 0; --j)
        levels.push_back(level_log(c, k, Quadrature::composite(br, std::max(order >> j, 1)), route));
    return detail::romberg_log(levels);
}

DetSample det_D(const CoeffPair& c, cd k, const DetOptions& opts) {
    check_k(k, k_min(c.gamma));
    DetSample out;
    out.k = k;
    out.route = resolve_route(c, k, opts);
    if (c.is_free()) {
        out.value = 1.0;
        out.log_value = 0.0;
        out.order = 0;
        return out;
    }
    if (opts.start_order < 1 || opts.max_order < opts.start_order || !(opts.tol > 0))
        throw InputError("invalid determinant options");
    const auto br = c.breakpoints();
    int order = std::max(opts.start_order, round_up16(std::abs(k) * longest_piece(c) / 8.0));
    order = std::min(order, opts.max_order);

    // column j holds j eliminations; the column with the smallest step wins
    std::vector<cd> raw;
    std::array<std::vector<cd>, 4> cols;
    double err = INFINITY;
    auto step_of = [](cd a, cd b) {
        const double m = a.real();
        return std::abs(std::exp(a - m) - std::exp(b - m)) * std::exp(m);
    };
    for (;; order *= 2) {
        if (order > opts.max_order) break;
        raw.push_back(level_log(c, k, Quadrature::composite(br, order), out.route));
        out.order = order;
        const std::size_t n = raw.size();
        cols[0].push_back(raw.back());
        for (std::size_t j = 1; opts.extrapolate && j < cols.size() && j < n; ++j)
            cols[j].push_back(detail::romberg_log({raw.end() - (j + 1), raw.end()}, int(j)));
        out.log_value = raw.back();
        err = INFINITY;
        for (int j = opts.extrapolate ? 1 : 0; j < (opts.extrapolate ? int(cols.size()) : 1); ++j) {
            const auto& e = cols[j];
            if (e.size() < 2) continue;
            const std::size_t m = e.size();
            double d = step_of(e[m - 1], e[m - 2]);
            if (m >= 3) d = detail::tail_estimate(step_of(e[m - 2], e[m - 3]), d);
            if (d < err) {
                err = d;
                out.log_value = e.back();
            }
        }
        if (opts.extrapolate && n >= 2 && !std::isfinite(err)) out.log_value = cols[1].back();
        if (err <= opts.tol * (1.0 + std::exp(out.log_value.real()))) break;
    }
    std::vector<cd> est = cols[opts.extrapolate ? 1 : 0];
    out.value = std::exp(out.log_value);
    out.err_est = err;
    const double m = out.log_value.real();
    out.converged = std::isfinite(err) && err <= opts.tol * (1.0 + std::exp(m));
    if (!out.converged && !opts.allow_unconverged) {
        std::ostringstream os;
        os << "determinant not converged at k = " << k << " (order " << out.order << ", err " << err << ")";
        cd prev = est.size() >= 2 ? std::exp(est[est.size() - 2]) : cd(NAN, NAN);
        throw NoConvergence(os.str(), out.value, prev);
    }
    return out;
}

cd trace_matrix(const NystromBlock& b) { return b.Y.trace(); }

cd fourier_hat(const CompactCoeff& f, cd k) {
    cd acc = 0.0;
    for (const auto& pc : f.pieces()) {
        acc += integrate_complex(
            [&](double x) { return std::exp(2.0 * I * k * x) * f(std::clamp(x, pc.x0, std::nextafter(pc.x1, pc.x0))); },
            pc.x0, pc.x1);
    }
    return acc;
}

cd trace_Y0_closed(const CoeffPair& c, cd k) {
    check_k(k, k_min(c.gamma));
    cd t = 0.0;
    if (!c.p.is_zero())
        t -= ((1.0 + I) * c.p0 + I * fourier_hat(c.p, k) + fourier_hat(c.p, I * k)) / (2.0 * k);
    if (!c.q.is_zero())
        t -= ((1.0 - I) * c.q0 + I * fourier_hat(c.q, k) - fourier_hat(c.q, I * k)) / (4.0 * k * k * k);
    return t;
}

AsymptoticReport log_det_asymptotic_check(const CoeffPair& c, double radius, int samples, DetOptions opts) {
    if (radius < 20.0 / c.gamma) throw InputError("radius must be at least 20/gamma");
    if (samples < 3) throw InputError("need at least 3 arc samples");
    AsymptoticReport r;
    r.radius = radius;
    r.expected = -(1.0 + I) * c.p0 / 2.0;
    // least squares for k (D - 1) = c0 + c1 / k
    Eigen::MatrixXcd M(samples, 2);
    Eigen::VectorXcd rhs(samples);
    for (int j = 0; j < samples; ++j) {
        const double th = 0.5 * M_PI * j / (samples - 1);
        const cd k = std::polar(radius, th);
        const cd D = det_D(c, k, opts).value;
        r.ks.push_back(k);
        r.scaled.push_back(k * (D - 1.0));
        M(j, 0) = 1.0;
        M(j, 1) = 1.0 / k;
        rhs[j] = r.scaled.back();
    }
    Eigen::Vector2cd sol = M.colPivHouseholderQr().solve(rhs);
    r.fitted = sol[0];
    const double ref = std::abs(r.expected);
    r.deviation = ref > 0 ? std::abs(r.fitted - r.expected) / ref : std::abs(r.fitted);
    return r;
}

}  // namespace beamres
