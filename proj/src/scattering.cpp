#include "beamres/scattering.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "beamres/errors.hpp"
#include "beamres/integrate.hpp"
#include "nystrom_internal.hpp"

namespace beamres {

namespace {
constexpr cd I{0.0, 1.0};
const double kNorm = std::sqrt(2.0 / M_PI);

cd integrate_pieces(const CoeffPair& c, const std::function<cd(double)>& f) {
    cd acc = 0.0;
    const auto br = c.breakpoints();
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
        const double lo = br[i], hi = br[i + 1];
        // stay inside the interval so jumps at its ends are not sampled
        acc += integrate_complex([&](double x) { return f(std::clamp(x, lo, std::nextafter(hi, lo))); }, lo, hi);
    }
    return acc;
}

// Romberg over doubling grids on values that are affine in the grid error; the column
// with the smallest step wins.
template <class F>
std::vector<cd> extrapolated(const CoeffPair& c, cd k, const DetOptions& opts, F level, int& order_out,
                             double& err_out) {
    using Vec = std::vector<cd>;
    const auto br = c.breakpoints();
    double longest = 0.0;
    for (std::size_t i = 0; i + 1 < br.size(); ++i) longest = std::max(longest, br[i + 1] - br[i]);
    int order = std::max(opts.start_order, 16 * int(std::ceil(std::abs(k) * longest / 8.0 / 16.0)));
    order = std::min(order, opts.max_order);
    auto step = [](const Vec& a, const Vec& b) {
        double d = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]) / (1.0 + std::abs(a[i])));
        return d;
    };
    std::array<std::vector<Vec>, 4> cols;
    Vec cur;
    double err = INFINITY;
    for (; order <= opts.max_order; order *= 2) {
        cols[0].push_back(level(Quadrature::composite(br, order)));
        order_out = order;
        const std::size_t n = cols[0].size();
        double ratio = 4.0;
        for (std::size_t j = 1; opts.extrapolate && j < cols.size() && j < n; ++j, ratio *= 4.0) {
            const Vec& f = cols[j - 1].back();
            const Vec& g = cols[j - 1][cols[j - 1].size() - 2];
            Vec e(f.size());
            for (std::size_t i = 0; i < f.size(); ++i) e[i] = (ratio * f[i] - g[i]) / (ratio - 1.0);
            cols[j].push_back(e);
        }
        cur = cols[opts.extrapolate && n >= 2 ? 1 : 0].back();
        err = INFINITY;
        for (std::size_t j = opts.extrapolate ? 1 : 0; j < (opts.extrapolate ? cols.size() : 1); ++j) {
            const auto& e = cols[j];
            const std::size_t m = e.size();
            if (m < 2) continue;
            double d = step(e[m - 1], e[m - 2]);
            if (m >= 3) d = detail::tail_estimate(step(e[m - 2], e[m - 3]), d);
            if (d < err) {
                err = d;
                cur = e.back();
            }
        }
        if (err <= opts.tol) break;
    }
    err_out = err;
    if (!(err <= opts.tol) && !opts.allow_unconverged) {
        std::ostringstream os;
        os << "scattering quantities not converged at k = " << k << " (order " << order_out << ", err " << err << ")";
        const cd prev = cols[0].size() >= 2 ? cols[0][cols[0].size() - 2][0] : cd(NAN);
        throw NoConvergence(os.str(), cur.empty() ? cd(NAN) : cur[0], prev);
    }
    return cur;
}

void check_solvable(const detail::Factored& f, cd k) {
    if (f.b.side() == 0) return;
    const auto& U = f.lu.matrixLU();
    double mx = 0.0, mn = INFINITY;
    for (int i = 0; i < U.rows(); ++i) {
        mx = std::max(mx, std::abs(U(i, i)));
        mn = std::min(mn, std::abs(U(i, i)));
    }
    if (!(mn > 0.0) || mx / mn > 1e14) {
        std::ostringstream os;
        os << "I + Y0 numerically singular at k = " << k;
        throw SingularAtResonance(os.str());
    }
}

}  // namespace

PsiPair psi_functionals(const NystromBlock& b, cd k) {
    const int n = b.n();
    PsiPair out;
    out.row.setZero(b.side());
    out.col.setZero(b.side());
    const int qo = b.q_offset();
    for (int i = 0; i < n; ++i) {
        const cd cs = std::cos(k * b.x[i]), sn = std::sin(k * b.x[i]);
        if (b.has_p) {
            out.row[i] = kNorm * (-k) * b.R1[i] * cs * b.sw[i];
            out.col[i] = kNorm * b.L1[i] * k * cs * b.sw[i];
        }
        if (b.has_q) {
            out.row[qo + i] = kNorm * b.R2[i] * sn * b.sw[i];
            out.col[qo + i] = kNorm * b.L2[i] * sn * b.sw[i];
        }
    }
    return out;
}

PsiPair psi_functionals(const CoeffPair& c, cd k, const Quadrature& quad) {
    return psi_functionals(build_Y0(c, k, quad), k);
}

cd A0(const CoeffPair& c, cd k) {
    if (c.is_free()) return 0.0;
    cd osc = integrate_pieces(c, [&](double x) { return (2.0 * k * k * c.p(x) + c.q(x)) * std::cos(2.0 * k * x); });
    return (c.q0 - 2.0 * c.p0 * k * k - osc) / M_PI;
}

cd B_of_k(const CoeffPair& c, cd k) {
    if (c.is_free()) return 0.0;
    cd v = integrate_pieces(c, [&](double x) {
        return -2.0 * I * k * k * c.p(x) * std::cosh(k * x) * std::cos(k * x) +
               I * c.q(x) * std::sinh(k * x) * std::sin(k * x);
    });
    return 2.0 / M_PI * v;
}

cd A1(const CoeffPair& c, cd k, const Quadrature& quad) {
    auto f = detail::factor(c, k, quad);
    check_solvable(f, k);
    auto psi = psi_functionals(f.b, k);
    return detail::contract(f, psi.row, psi.col);
}

ScatteringEval S_matrix(const CoeffPair& c, cd k, const DetOptions& opts) {
    check_k(k, k_min(c.gamma));
    ScatteringEval e;
    e.k = k;
    if (c.is_free()) return e;
    e.A0 = A0(c, k);
    auto v = extrapolated(c, k, opts,
                          [&](const Quadrature& q) {
                              auto f = detail::factor(c, k, q);
                              check_solvable(f, k);
                              auto psi = psi_functionals(f.b, k);
                              cd a1 = detail::contract(f, psi.row, psi.col);
                              return std::vector<cd>{1.0 + c_k(k) * (e.A0 - a1), a1};
                          },
                          e.order, e.err_est);
    e.S = v[0];
    e.A1 = v[1];
    return e;
}

ScatteringEval Omega(const CoeffPair& c, cd k, const DetOptions& opts) {
    check_k(k, k_min(c.gamma));
    ScatteringEval e;
    e.k = k;
    if (c.is_free()) return e;
    e.A0 = A0(c, k);
    e.B = B_of_k(c, k);
    Eigen::Matrix2cd O0;
    O0 << I * A0(c, I * k), e.B, I * e.B, e.A0;
    auto v = extrapolated(c, k, opts,
                          [&](const Quadrature& q) {
                              auto f = detail::factor(c, k, q);
                              check_solvable(f, k);
                              Eigen::Matrix2cd O = detail::omega_matrix(f, &O0);
                              return std::vector<cd>{O(0, 0), O(0, 1), O(1, 0), O(1, 1)};
                          },
                          e.order, e.err_est);
    e.Omega << v[0], v[1], v[2], v[3];
    e.detOmega = e.Omega.determinant();
    return e;
}

PhaseTrace scattering_phase(const CoeffPair& c, const std::vector<double>& k_grid, const DetOptions& opts,
                            int max_refine) {
    if (k_grid.empty()) return {};
    for (std::size_t i = 0; i + 1 < k_grid.size(); ++i)
        if (!(k_grid[i + 1] > k_grid[i])) throw InputError("phase grid must be increasing");
    if (!(k_grid.front() > 0)) throw InputError("phase grid must be positive");
    auto S_at = [&](double k) { return S_matrix(c, k, opts).S; };
    const std::size_t n = k_grid.size();
    std::vector<cd> S(n);
    for (std::size_t i = 0; i < n; ++i) S[i] = S_at(k_grid[i]);
    PhaseTrace out;
    out.k = k_grid;
    out.S = S;
    out.phi.assign(n, 0.0);
    // -2 pi phi = arg S; start from the principal branch at the largest k
    double arg = std::arg(S[n - 1]);
    out.phi[n - 1] = -arg / (2.0 * M_PI);
    for (std::size_t i = n - 1; i-- > 0;) {
        // walk from k_grid[i+1] down to k_grid[i], bisecting until steps are small
        std::vector<std::pair<double, cd>> path{{k_grid[i + 1], S[i + 1]}, {k_grid[i], S[i]}};
        int depth = 0;
        for (;;) {
            bool fine = true;
            std::vector<std::pair<double, cd>> next{path[0]};
            for (std::size_t j = 0; j + 1 < path.size(); ++j) {
                double step = std::abs(std::arg(path[j + 1].second / path[j].second));
                if (step > M_PI / 4) {
                    fine = false;
                    double km = 0.5 * (path[j].first + path[j + 1].first);
                    next.emplace_back(km, S_at(km));
                }
                next.push_back(path[j + 1]);
            }
            if (fine) break;
            if (++depth > max_refine) {
                std::ostringstream os;
                os << "phase of S not resolved near k = " << k_grid[i];
                throw PhaseJump(os.str());
            }
            path = std::move(next);
        }
        for (std::size_t j = 0; j + 1 < path.size(); ++j) arg += std::arg(path[j + 1].second / path[j].second);
        out.phi[i] = -arg / (2.0 * M_PI);
    }
    return out;
}

}  // namespace beamres
