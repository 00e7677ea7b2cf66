#include "beamres/coeffs.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "beamres/chebyshev.hpp"
#include "beamres/errors.hpp"

namespace beamres {

namespace {

double horner(const std::vector<double>& c, double u) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * u + *it;
    return acc;
}

std::vector<double> unique_sorted(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::vector<double> out;
    for (double x : v) {
        if (out.empty() || std::abs(x - out.back()) > 1e-14 * (1.0 + std::abs(x))) out.push_back(x);
    }
    return out;
}

}  // namespace

CompactCoeff::CompactCoeff(double support_end, std::vector<Piece> pieces)
    : gamma_(support_end), pieces_(std::move(pieces)) {
    if (!(gamma_ > 0.0) || !std::isfinite(gamma_)) throw InputError("support_end must be positive");
    std::sort(pieces_.begin(), pieces_.end(), [](const Piece& a, const Piece& b) { return a.x0 < b.x0; });
    double prev = 0.0;
    for (const auto& pc : pieces_) {
        if (!(pc.x1 > pc.x0)) throw InputError("piece with x1 <= x0");
        if (pc.x0 < -1e-14 || pc.x1 > gamma_ * (1 + 1e-14)) throw InputError("piece outside [0, support_end]");
        if (pc.x0 < prev - 1e-14) throw InputError("overlapping pieces");
        if (pc.cheb.empty()) throw InputError("piece without coefficients");
        for (double c : pc.cheb)
            if (!std::isfinite(c)) throw InputError("non-finite coefficient");
        prev = pc.x1;
    }
}

CompactCoeff CompactCoeff::zero(double support_end) { return CompactCoeff(support_end, {}); }

CompactCoeff CompactCoeff::step(double value, double x0, double x1, double support_end) {
    return CompactCoeff(support_end, {Piece{x0, x1, {value}}});
}

CompactCoeff CompactCoeff::from_monomial(double support_end, const std::vector<MonomialPiece>& in) {
    std::vector<Piece> out;
    for (const auto& m : in) {
        if (m.coeffs.empty()) throw InputError("piece without coefficients");
        if (static_cast<int>(m.coeffs.size()) - 1 > max_monomial_degree) {
            std::ostringstream os;
            os << "piece degree " << m.coeffs.size() - 1 << " exceeds " << max_monomial_degree;
            throw InputError(os.str());
        }
        if (!(m.x1 > m.x0)) throw InputError("piece with x1 <= x0");
        const int n = static_cast<int>(m.coeffs.size());
        auto c = cheb::fit([&](double x) { return horner(m.coeffs, x - m.x0); }, m.x0, m.x1, n);
        out.push_back(Piece{m.x0, m.x1, std::move(c)});
    }
    return CompactCoeff(support_end, std::move(out));
}

CompactCoeff CompactCoeff::sample(double support_end, const std::vector<double>& breaks, int n,
                                  const std::function<double(double)>& f) {
    std::vector<Piece> out;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        out.push_back(Piece{breaks[i], breaks[i + 1], cheb::fit(f, breaks[i], breaks[i + 1], n)});
    }
    return CompactCoeff(support_end, std::move(out));
}

const Piece* CompactCoeff::find_right(double x) const {
    for (const auto& pc : pieces_)
        if (pc.x0 <= x && x < pc.x1) return &pc;
    return nullptr;
}

const Piece* CompactCoeff::find_left(double x) const {
    for (const auto& pc : pieces_)
        if (pc.x0 < x && x <= pc.x1) return &pc;
    return nullptr;
}

double CompactCoeff::operator()(double x) const {
    if (x < 0.0 || x > gamma_) return 0.0;
    const Piece* pc = find_right(x);
    if (!pc) pc = find_left(x);
    return pc ? cheb::eval(pc->cheb, pc->x0, pc->x1, x) : 0.0;
}

double CompactCoeff::left(double x) const {
    const Piece* pc = find_left(x);
    return pc ? cheb::eval(pc->cheb, pc->x0, pc->x1, x) : 0.0;
}

double CompactCoeff::right(double x) const {
    const Piece* pc = find_right(x);
    return pc ? cheb::eval(pc->cheb, pc->x0, pc->x1, x) : 0.0;
}

CompactCoeff CompactCoeff::derivative() const {
    std::vector<Piece> out;
    for (const auto& pc : pieces_) out.push_back(Piece{pc.x0, pc.x1, cheb::derivative(pc.cheb, pc.x0, pc.x1)});
    return CompactCoeff(gamma_, std::move(out));
}

double CompactCoeff::integral() const {
    double acc = 0.0;
    for (const auto& pc : pieces_) acc += cheb::integral(pc.cheb, pc.x0, pc.x1);
    return acc;
}

double CompactCoeff::integral(double a, double b) const {
    double acc = 0.0;
    for (const auto& pc : pieces_) {
        double lo = std::max(a, pc.x0), hi = std::min(b, pc.x1);
        if (hi <= lo) continue;
        if (lo == pc.x0 && hi == pc.x1) {
            acc += cheb::integral(pc.cheb, pc.x0, pc.x1);
            continue;
        }
        // polynomial of known degree: Gauss-Kronrod is exact to rounding
        auto f = [&](double x) { return cheb::eval(pc.cheb, pc.x0, pc.x1, x); };
        acc += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 0);
    }
    return acc;
}

std::vector<double> CompactCoeff::breakpoints() const {
    std::vector<double> v;
    for (const auto& pc : pieces_) {
        v.push_back(pc.x0);
        v.push_back(pc.x1);
    }
    return unique_sorted(v);
}

int CompactCoeff::degree() const {
    int d = 0;
    for (const auto& pc : pieces_) {
        auto c = pc.cheb;
        cheb::trim(c, 0.0);
        d = std::max(d, static_cast<int>(c.size()) - 1);
    }
    return d;
}

bool CompactCoeff::is_zero() const {
    for (const auto& pc : pieces_)
        for (double c : pc.cheb)
            if (c != 0.0) return false;
    return true;
}

double CompactCoeff::max_abs() const {
    double m = 0.0;
    for (const auto& pc : pieces_) {
        for (double x : cheb::lobatto_points(pc.x0, pc.x1, std::max<int>(pc.cheb.size() * 2, 8)))
            m = std::max(m, std::abs(cheb::eval(pc.cheb, pc.x0, pc.x1, x)));
    }
    return m;
}

std::vector<double> CompactCoeff::monomial(std::size_t i) const {
    const Piece& pc = pieces_.at(i);
    const double L = pc.x1 - pc.x0;
    // s = -1 + (2/L) u, build T_k(s) as polynomials in u
    const std::size_t n = pc.cheb.size();
    std::vector<double> out(n, 0.0);
    std::vector<double> tprev{1.0}, tcur{-1.0, 2.0 / L};
    out[0] += pc.cheb[0];
    if (n > 1)
        for (std::size_t j = 0; j < tcur.size(); ++j) out[j] += pc.cheb[1] * tcur[j];
    for (std::size_t k = 2; k < n; ++k) {
        std::vector<double> tnext(k + 1, 0.0);
        for (std::size_t j = 0; j < tcur.size(); ++j) {
            tnext[j] += -2.0 * tcur[j];
            tnext[j + 1] += 2.0 * (2.0 / L) * tcur[j];
        }
        for (std::size_t j = 0; j < tprev.size(); ++j) tnext[j] -= tprev[j];
        for (std::size_t j = 0; j <= k; ++j) out[j] += pc.cheb[k] * tnext[j];
        tprev = std::move(tcur);
        tcur = std::move(tnext);
    }
    return out;
}

CoeffPair::CoeffPair(CompactCoeff p_, CompactCoeff q_) : p(std::move(p_)), q(std::move(q_)) {
    gamma = std::max(p.support_end(), q.support_end());
    p0 = p.integral();
    q0 = q.integral();
    p_plus = p.left(gamma);
}

std::vector<double> CoeffPair::breakpoints() const {
    auto v = p.breakpoints();
    auto w = q.breakpoints();
    v.insert(v.end(), w.begin(), w.end());
    v.push_back(0.0);
    v.push_back(gamma);
    return unique_sorted(v);
}

double BeamCoeffs::da(double x) const { return a_off.derivative()(x); }
double BeamCoeffs::db(double x) const { return b_off.derivative()(x); }

std::vector<double> BeamCoeffs::breakpoints() const {
    auto v = a_off.breakpoints();
    auto w = b_off.breakpoints();
    v.insert(v.end(), w.begin(), w.end());
    v.push_back(0.0);
    v.push_back(1.0);
    return unique_sorted(v);
}

void BeamCoeffs::validate() const {
    for (const auto* c : {&a_off, &b_off}) {
        for (const auto& pc : c->pieces())
            if (pc.x1 > 1.0 + 1e-14) throw InputError("beam offsets must vanish for x > 1");
    }
    const auto br = breakpoints();
    std::vector<double> grid = br;
    for (int j = 0; j <= 4000; ++j) grid.push_back(j / 4000.0);
    for (double x : grid) {
        for (double v : {1.0 + a_off.left(x), 1.0 + a_off.right(x), 1.0 + b_off.left(x), 1.0 + b_off.right(x)}) {
            if (!(v > 0.0)) {
                std::ostringstream os;
                os << "beam coefficient not positive at x=" << x;
                throw NonPositiveCoefficient(os.str());
            }
        }
    }
    const double c0 = 3.0 * a_off.derivative().right(0.0) / (1.0 + a_off.right(0.0)) +
                      5.0 * b_off.derivative().right(0.0) / (1.0 + b_off.right(0.0));
    if (std::abs(c0) > 1e-8) {
        std::ostringstream os;
        os << "(3a'/a + 5b'/b)(0) = " << c0;
        throw BoundaryConstraintViolated(os.str());
    }
    for (const auto* c : {&a_off, &b_off}) {
        CompactCoeff d = *c;
        for (int order = 0; order <= 3; ++order) {
            const double scale = 1.0 + d.max_abs();
            for (double x : br) {
                if (x <= 0.0) continue;
                if (std::abs(d.left(x) - d.right(x)) > 1e-8 * scale) {
                    std::ostringstream os;
                    os << "derivative of order " << order << " jumps at x=" << x << " (need four derivatives)";
                    throw InsufficientSmoothness(os.str());
                }
            }
            d = d.derivative();
        }
    }
}

BeamMap::BeamMap(const BeamCoeffs& beam) : beam_(beam), xb_(beam.breakpoints()) {
    tb_.assign(xb_.size(), 0.0);
    for (std::size_t i = 0; i + 1 < xb_.size(); ++i) tb_[i + 1] = tb_[i] + partial(i, xb_[i + 1]);
}

double BeamMap::rate(double x) const { return std::pow(beam_.b(x) / beam_.a(x), 0.25); }

double BeamMap::partial(std::size_t i, double x) const {
    if (x <= xb_[i]) return 0.0;
    // evaluate with the interval's own pieces so breakpoint jumps do not leak in
    const double lo = xb_[i], hi = xb_[i + 1];
    auto f = [&](double s) { return rate(std::clamp(s, std::nextafter(lo, hi), std::nextafter(hi, lo))); };
    // the Gauss-Kronrod estimate bounds the embedded Gauss error, far above the Kronrod error
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, x, 10, 1e-13);
}

double BeamMap::t_of_x(double x) const {
    if (x <= 0.0) return x;
    if (x >= xb_.back()) return tb_.back() + (x - xb_.back());
    auto it = std::upper_bound(xb_.begin(), xb_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - xb_.begin()) - 1;
    return tb_[i] + partial(i, x);
}

double BeamMap::x_of_t(double t) const {
    if (t <= 0.0) return t;
    if (t >= tb_.back()) return xb_.back() + (t - tb_.back());
    auto it = std::upper_bound(tb_.begin(), tb_.end(), t);
    std::size_t i = static_cast<std::size_t>(it - tb_.begin()) - 1;
    const double lo = xb_[i], hi = xb_[i + 1];
    auto f = [&](double x) {
        return std::make_pair(tb_[i] + partial(i, x) - t, rate(std::clamp(x, lo, hi)));
    };
    double guess = lo + (hi - lo) * (t - tb_[i]) / (tb_[i + 1] - tb_[i]);
    std::uintmax_t iters = 100;
    return boost::math::tools::newton_raphson_iterate(f, guess, lo, hi, 50, iters);
}

LiouvilleData liouville_data(const BeamCoeffs& beam, int grid_order) {
    beam.validate();
    if (grid_order < 8) throw InputError("grid_order must be at least 8");
    BeamMap map(beam);
    const auto& xb = map.x_breaks();
    const auto& tb = map.t_breaks();
    const double gamma = map.gamma();
    const CompactCoeff da = beam.a_off.derivative();
    const CompactCoeff db = beam.b_off.derivative();
    const double trim_tol = 1e-14;

    std::vector<Piece> pp, qp, ap, bp, kp;
    for (std::size_t i = 0; i + 1 < tb.size(); ++i) {
        const double t0 = tb[i], t1 = tb[i + 1];
        const double xlo = xb[i], xhi = xb[i + 1];
        auto ts = cheb::lobatto_points(t0, t1, grid_order);
        std::vector<double> av(grid_order), bv(grid_order);
        for (int j = 0; j < grid_order; ++j) {
            double x = (j == 0) ? xlo : (j == grid_order - 1) ? xhi : map.x_of_t(ts[j]);
            // one-sided evaluation inside the interval
            double xs = std::clamp(x, std::nextafter(xlo, xhi), std::nextafter(xhi, xlo));
            double a = beam.a(xs), b = beam.b(xs);
            double s = std::pow(a / b, 0.25);
            av[j] = da(xs) / a * s;
            bv[j] = db(xs) / b * s;
        }
        auto ca = cheb::fit_values(av);
        auto cb = cheb::fit_values(bv);
        cheb::trim(ca, trim_tol);
        cheb::trim(cb, trim_tol);
        auto ev = [&](const std::vector<double>& c, double t) { return cheb::eval(c, t0, t1, t); };
        auto lin = [&](double u, double v) {
            std::vector<double> c(std::max(ca.size(), cb.size()), 0.0);
            for (std::size_t k = 0; k < ca.size(); ++k) c[k] += u * ca[k];
            for (std::size_t k = 0; k < cb.size(); ++k) c[k] += v * cb[k];
            return c;
        };
        auto e0 = lin(0.75, 1.25), e1 = lin(0.125, 0.375), e2 = lin(0.375, 0.125);
        auto de0 = cheb::derivative(e0, t0, t1);
        auto de1 = cheb::derivative(e1, t0, t1);
        auto dde1 = cheb::derivative(de1, t0, t1);
        auto de2 = cheb::derivative(e2, t0, t1);

        std::vector<double> kv(grid_order), pv(grid_order), gv(grid_order);
        for (int j = 0; j < grid_order; ++j) {
            double t = ts[j];
            double al = ev(ca, t), be = ev(cb, t);
            double kap = (5 * al * al + 5 * be * be + 6 * al * be) / 32.0;
            kv[j] = kap;
            pv[j] = -0.5 * (ev(de0, t) + kap);
            double eps1 = ev(e1, t), eps2 = ev(e2, t);
            gv[j] = (ev(de2, t) + eps2 * eps2) * eps1 - ev(dde1, t);
        }
        auto cg = cheb::fit_values(gv);
        cheb::trim(cg, trim_tol);
        auto dg = cheb::derivative(cg, t0, t1);
        std::vector<double> qv(grid_order);
        for (int j = 0; j < grid_order; ++j) qv[j] = ev(dg, ts[j]) + ev(cg, ts[j]) * ev(e1, ts[j]);

        auto finish = [&](std::vector<double> v) {
            auto c = cheb::fit_values(v);
            cheb::trim(c, 0.0);
            return Piece{t0, t1, std::move(c)};
        };
        pp.push_back(finish(pv));
        qp.push_back(finish(qv));
        kp.push_back(finish(kv));
        ap.push_back(Piece{t0, t1, ca});
        bp.push_back(Piece{t0, t1, cb});
    }
    LiouvilleData out;
    out.pq = CoeffPair(CompactCoeff(gamma, pp), CompactCoeff(gamma, qp));
    out.alpha = CompactCoeff(gamma, ap);
    out.beta = CompactCoeff(gamma, bp);
    out.kappa = CompactCoeff(gamma, kp);
    return out;
}

CoeffPair liouville_transform(const BeamCoeffs& beam, int grid_order) {
    return liouville_data(beam, grid_order).pq;
}

double kappa_integral(const BeamCoeffs& beam, int grid_order) {
    return liouville_data(beam, grid_order).kappa.integral();
}

CompactCoeff square_case_q(const CompactCoeff& p) {
    if (p.is_zero()) return CompactCoeff::zero(p.support_end());
    if (p.degree() < 2) throw InsufficientSmoothness("square case needs p with two derivatives (degree >= 2)");
    std::vector<Piece> out;
    for (const auto& pc : p.pieces()) {
        auto d1 = cheb::derivative(pc.cheb, pc.x0, pc.x1);
        auto d2 = cheb::derivative(d1, pc.x0, pc.x1);
        const int n = 2 * static_cast<int>(pc.cheb.size()) - 1;
        auto c = cheb::fit(
            [&](double x) {
                double v = cheb::eval(pc.cheb, pc.x0, pc.x1, x);
                return cheb::eval(d2, pc.x0, pc.x1, x) + v * v;
            },
            pc.x0, pc.x1, std::max(n, 1));
        out.push_back(Piece{pc.x0, pc.x1, std::move(c)});
    }
    return CompactCoeff(p.support_end(), std::move(out));
}

}  // namespace beamres
