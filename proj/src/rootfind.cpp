#include "beamres/rootfind.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <sstream>

#include "beamres/errors.hpp"
#include "beamres/parallel.hpp"
#include "nystrom_internal.hpp"

namespace beamres {

namespace {
constexpr cd I{0.0, 1.0};

double wrap(double a) { return std::remainder(a, 2.0 * M_PI); }

cd logd(const CoeffPair& c, cd k, const WindingOptions& o) { return det_D(c, k, o.det).log_value; }

int to_winding(double delta, const std::string& where) {
    const double w = delta / (2.0 * M_PI);
    const double r = std::round(w);
    if (std::abs(w - r) > 0.25) {
        std::ostringstream os;
        os << "non-integer winding " << w << " on " << where;
        throw PhaseJump(os.str());
    }
    return static_cast<int>(r);
}

void check_floor(const PhaseRun& run, const WindingOptions& o, const std::string& where) {
    if (run.min_abs_D < o.zero_floor) {
        std::ostringstream os;
        os << "|D| = " << run.min_abs_D << " on " << where;
        throw ZeroOnContour(os.str());
    }
}
}  // namespace

PhaseRun phase_change(const CoeffPair& c, const std::function<cd(double)>& z, double t0, double t1,
                      const WindingOptions& o) {
    PhaseRun run;
    if (c.is_free()) {
        run.min_abs_D = 1.0;
        return run;
    }
    // D turns at a rate of order gamma per unit |dk|; start dense enough that no step can alias a full turn
    double len = 0.0;
    for (int j = 0; j < 64; ++j) len += std::abs(z(t0 + (t1 - t0) * (j + 1) / 64) - z(t0 + (t1 - t0) * j / 64));
    const int n0 = std::max({o.initial_samples, 2, static_cast<int>(std::ceil(o.density * c.gamma * len))});
    std::vector<double> ts(n0 + 1);
    for (int j = 0; j <= n0; ++j) ts[j] = t0 + (t1 - t0) * j / n0;
    ts.back() = t1;
    std::vector<cd> ls = parallel_map<cd>(ts.size(), o.threads, [&](std::size_t j) { return logd(c, z(ts[j]), o); });
    for (;;) {
        std::vector<std::size_t> bad;
        for (std::size_t j = 0; j + 1 < ts.size(); ++j)
            if (std::abs(wrap(ls[j + 1].imag() - ls[j].imag())) > o.max_step) bad.push_back(j);
        if (bad.empty()) break;
        if (static_cast<int>(ts.size() + bad.size()) > o.max_samples) {
            std::ostringstream os;
            os << "phase steps unresolved after " << ts.size() << " samples near k = " << z(ts[bad.front()]);
            throw PhaseJump(os.str());
        }
        std::vector<double> mids(bad.size());
        for (std::size_t b = 0; b < bad.size(); ++b) mids[b] = 0.5 * (ts[bad[b]] + ts[bad[b] + 1]);
        std::vector<cd> lm =
            parallel_map<cd>(mids.size(), o.threads, [&](std::size_t j) { return logd(c, z(mids[j]), o); });
        std::vector<double> nt;
        std::vector<cd> nl;
        std::size_t b = 0;
        for (std::size_t j = 0; j < ts.size(); ++j) {
            nt.push_back(ts[j]);
            nl.push_back(ls[j]);
            if (b < bad.size() && bad[b] == j) {
                nt.push_back(mids[b]);
                nl.push_back(lm[b]);
                ++b;
            }
        }
        ts.swap(nt);
        ls.swap(nl);
    }
    for (std::size_t j = 0; j + 1 < ts.size(); ++j) run.delta += wrap(ls[j + 1].imag() - ls[j].imag());
    for (const auto& l : ls) run.min_abs_D = std::min(run.min_abs_D, std::exp(l.real()));
    run.samples = static_cast<int>(ts.size());
    return run;
}

ContourCount winding_number(const CoeffPair& c, cd center, double radius, const WindingOptions& o) {
    if (std::abs(center) <= radius + k_min(c.gamma)) {
        std::ostringstream os;
        os << "contour around " << center << " with radius " << radius << " meets the k_min disc";
        throw KTooSmall(os.str());
    }
    ContourCount out;
    out.center = center;
    out.radius = radius;
    auto run = phase_change(c, [&](double t) { return center + std::polar(radius, 2.0 * M_PI * t); }, 0.0, 1.0, o);
    std::ostringstream where;
    where << "circle center " << center << " radius " << radius;
    check_floor(run, o, where.str());
    out.winding = to_winding(run.delta, where.str());
    out.samples = run.samples;
    out.min_abs_D = run.min_abs_D;
    return out;
}

int winding_rect(const CoeffPair& c, double x0, double x1, double y0, double y1, const WindingOptions& o,
                 double* min_abs) {
    const cd v[4] = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
    double delta = 0.0, mn = INFINITY;
    std::ostringstream where;
    where << "box [" << x0 << "," << x1 << "]x[" << y0 << "," << y1 << "]";
    for (int e = 0; e < 4; ++e) {
        const cd a = v[e], b = v[(e + 1) % 4];
        auto run = phase_change(c, [&](double t) { return a + (b - a) * t; }, 0.0, 1.0, o);
        delta += run.delta;
        mn = std::min(mn, run.min_abs_D);
    }
    PhaseRun all;
    all.min_abs_D = mn;
    check_floor(all, o, where.str());
    if (min_abs) *min_abs = mn;
    return to_winding(delta, where.str());
}

std::vector<Seed> asymptotic_seeds(double p_plus, double gamma, int n_first, int n_last) {
    if (p_plus == 0.0) throw ZeroJump("seed lattice needs p(gamma-0) != 0");
    if (!(gamma > 0)) throw InputError("gamma must be positive");
    std::vector<Seed> out;
    for (int n = std::max(n_first, 1); n <= n_last; ++n) {
        const double j = p_plus > 0 ? n : n + 0.5;
        Seed s;
        s.n = n;
        s.k_plus = (I * M_PI * j - std::log(2.0 * M_PI * n / (gamma * std::sqrt(std::abs(2.0 * p_plus))))) / gamma;
        s.k_minus = I * s.k_plus - M_PI / (2.0 * gamma);
        out.push_back(s);
    }
    return out;
}

std::string quadrant_name(cd k) { return "K" + std::to_string(detail::quadrant(k)); }

NewtonResult newton_zero(const CoeffPair& c, cd k0, const RootOptions& o) {
    NewtonResult r;
    r.k = k0;
    if (c.is_free()) return r;
    const auto start = det_D(c, k0, o.newton_det);
    const Route route = start.route;
    const bool ex = o.newton_det.extrapolate;
    const double shift = start.log_value.real();
    auto finite = [&](cd k) { return std::isfinite(k.real()) && std::isfinite(k.imag()) && std::abs(k) >= k_min(c.gamma); };
    // Newton on the grid of the given order; the fixed grid keeps D smooth in k
    auto run = [&](int order, int max_it) {
        auto D = [&](cd k) { return std::exp(log_det_at(c, k, order, route, ex) - shift); };
        for (int it = 1; it <= max_it; ++it) {
            const double h = 1e-5 * (1.0 + std::abs(r.k));
            const cd f = D(r.k);
            const cd df = (D(r.k + h) - D(r.k - h)) / (2.0 * h);
            if (df == cd(0.0)) return false;
            cd step = f / df;
            const double cap = o.max_newton_step / c.gamma;
            if (std::abs(step) > cap) step *= cap / std::abs(step);
            r.k -= step;
            ++r.iterations;
            if (!finite(r.k)) return false;
            if (std::abs(step) < o.newton_tol * (1.0 + std::abs(r.k))) return true;
        }
        return false;
    };
    int order = start.order;
    r.converged = run(order, o.max_newton);
    // the coarse grid shifts the zero by its discretization error; polish on a finer one
    if (r.converged && o.polish_order > order) {
        order = o.polish_order;
        r.converged = run(order, 8);
    }
    if (finite(r.k))
        r.residual = std::abs(std::exp(log_det_at(c, r.k, order, route, ex) - std::max(shift, 0.0)));
    else
        r.converged = false;
    return r;
}

int multiplicity_at(const CoeffPair& c, cd k, const WindingOptions& o) {
    return winding_number(c, k, 1e-3 * (1.0 + std::abs(k)), o).winding;
}

ResonanceSet find_resonances(const CoeffPair& c, const Box& region, const std::vector<cd>& seeds,
                             const RootOptions& o) {
    ResonanceSet out;
    if (c.is_free()) return out;
    if (!(region.x1 > region.x0) || !(region.y1 > region.y0)) throw InputError("empty search box");
    const double strip = 1e-2;
    struct Item {
        Box b;
        int depth;
    };
    std::vector<Item> stack{{region, 0}};
    auto inside = [](const Box& b, cd k) {
        return k.real() >= b.x0 && k.real() <= b.x1 && k.imag() >= b.y0 && k.imag() <= b.y1;
    };
    auto split = [&](const Item& it, double f) {
        const Box& b = it.b;
        const double xm = b.x0 + f * (b.x1 - b.x0), ym = b.y0 + f * (b.y1 - b.y0);
        stack.push_back({{b.x0, xm, b.y0, ym}, it.depth + 1});
        stack.push_back({{xm, b.x1, b.y0, ym}, it.depth + 1});
        stack.push_back({{b.x0, xm, ym, b.y1}, it.depth + 1});
        stack.push_back({{xm, b.x1, ym, b.y1}, it.depth + 1});
    };
    auto known = [&](cd k) {
        for (const auto& z : out.zeros)
            if (std::abs(z.k - k) < 1e-7 * (1.0 + std::abs(k))) return true;
        return false;
    };
    while (!stack.empty()) {
        Item it = stack.back();
        stack.pop_back();
        const Box& b = it.b;
        // keep clear of the pole at 0
        if (b.x0 < strip && b.x1 > -strip && b.y0 < strip && b.y1 > -strip) {
            if (b.x1 - b.x0 < 4 * strip && b.y1 - b.y0 < 4 * strip) {
                out.unresolved.push_back(b);
                continue;
            }
            split(it, 0.4873);
            continue;
        }
        int w = 0;
        double scale = 0.0;
        try {
            w = winding_rect(c, b.x0, b.x1, b.y0, b.y1, o.winding, &scale);
        } catch (const ZeroOnContour&) {
            if (it.depth >= o.max_depth) {
                out.unresolved.push_back(b);
                continue;
            }
            // a zero on an edge: re-cut the parent region slightly differently
            const double dx = 1e-3 * (b.x1 - b.x0 + b.y1 - b.y0);
            stack.push_back({{b.x0 - dx, b.x1 + dx, b.y0 - dx, b.y1 + dx}, it.depth + 1});
            continue;
        } catch (const PhaseJump&) {
            if (it.depth >= o.max_depth) {
                out.unresolved.push_back(b);
                continue;
            }
            split(it, 0.5127);
            continue;
        }
        if (w <= 0) continue;
        const double size = std::max(b.x1 - b.x0, b.y1 - b.y0);
        if (w == 1 || size < o.min_box) {
            std::vector<cd> starts;
            for (cd s : seeds)
                if (inside(b, s)) starts.push_back(s);
            starts.push_back(cd(0.5 * (b.x0 + b.x1), 0.5 * (b.y0 + b.y1)));
            bool done = false;
            for (cd s : starts) {
                auto nr = newton_zero(c, s, o);
                if (!nr.converged || !inside(b, nr.k) || known(nr.k)) continue;
                int m = 1;
                try {
                    m = multiplicity_at(c, nr.k, o.winding);
                } catch (const NumericalError&) {
                    m = w;
                }
                if (m != w && size >= o.min_box) break;
                out.zeros.push_back(Zero{nr.k, m, quadrant_name(nr.k), nr.residual, nr.iterations});
                done = true;
                break;
            }
            if (done) continue;
            if (size < o.min_box || it.depth >= o.max_depth) {
                out.unresolved.push_back(b);
                continue;
            }
        }
        if (it.depth >= o.max_depth) {
            out.unresolved.push_back(b);
            continue;
        }
        split(it, 0.4873);
    }
    std::sort(out.zeros.begin(), out.zeros.end(), [](const Zero& a, const Zero& b) {
        return a.k.real() != b.k.real() ? a.k.real() < b.k.real() : a.k.imag() < b.k.imag();
    });
    return out;
}

std::vector<CountRow> counting_function(const CoeffPair& c, const std::vector<double>& radii, const WindingOptions& o) {
    for (std::size_t i = 0; i + 1 < radii.size(); ++i)
        if (!(radii[i + 1] > radii[i])) throw InputError("radii must be sorted ascending");
    std::vector<CountRow> rows;
    const double rho0 = std::max(1e-2, 2.0 * k_min(c.gamma));
    for (double r : radii) {
        if (!(r >= 5.0 / c.gamma)) throw InputError("counting radii must be at least 5/gamma");
        CountRow row;
        row.r = r;
        if (c.is_free()) {
            rows.push_back(row);
            continue;
        }
        double ray[4], outer[4], inner[4];
        for (int q = 0; q < 4; ++q) {
            const double th = q * M_PI / 2;
            auto run = phase_change(c, [&](double t) { return std::polar(t, th); }, rho0, r, o);
            std::ostringstream where;
            where << "ray arg " << th;
            check_floor(run, o, where.str());
            ray[q] = run.delta;
        }
        for (int q = 0; q < 4; ++q) {
            const double a = q * M_PI / 2, b = (q + 1) * M_PI / 2;
            auto ro = phase_change(c, [&](double t) { return std::polar(r, t); }, a, b, o);
            auto ri = phase_change(c, [&](double t) { return std::polar(rho0, t); }, b, a, o);
            check_floor(ro, o, "outer arc");
            check_floor(ri, o, "inner arc");
            outer[q] = ro.delta;
            inner[q] = ri.delta;
        }
        int counts[4];
        for (int q = 0; q < 4; ++q) {
            const double delta = ray[q] + outer[q] - ray[(q + 1) % 4] + inner[q];
            counts[q] = to_winding(delta, "sector " + std::to_string(q + 1));
        }
        row.N1 = counts[0];
        row.N2 = counts[1];
        row.N3 = counts[2];
        row.N4 = counts[3];
        row.N = row.N1 + row.N2 + row.N3 + row.N4;
        // independent full-circle pass on a fresh sampling
        WindingOptions o2 = o;
        o2.initial_samples = o.initial_samples * 3 + 1;
        o2.density = o.density * 1.1;
        auto big = phase_change(c, [&](double t) { return std::polar(r, t); }, 0.0, 2 * M_PI, o2);
        auto small = phase_change(c, [&](double t) { return std::polar(rho0, t); }, 0.0, 2 * M_PI, o2);
        row.full_circle = to_winding(big.delta, "outer circle") - to_winding(small.delta, "inner circle");
        rows.push_back(row);
    }
    return rows;
}

DiscResonances resonances_in_disc(const CoeffPair& c, double radius, const RootOptions& o) {
    DiscResonances out;
    out.count = counting_function(c, {radius}, o.winding).front();
    out.count.r = radius;
    if (c.is_free()) {
        out.complete = true;
        return out;
    }
    auto& zs = out.set.zeros;
    auto add = [&](const Zero& z) {
        if (!(std::abs(z.k) < radius)) return;
        for (const auto& y : zs)
            if (std::abs(y.k - z.k) < 1e-7 * (1.0 + std::abs(z.k))) return;
        zs.push_back(z);
    };
    auto add_pair = [&](const Zero& z) {
        add(z);
        Zero m = z;
        m.k = I * std::conj(z.k);
        m.quadrant = quadrant_name(m.k);
        add(m);
    };
    auto per_quadrant = [&] {
        std::array<int, 4> n{};
        for (const auto& z : zs) n[detail::quadrant(z.k) - 1] += z.multiplicity;
        return n;
    };
    const std::array<int, 4> want{out.count.N1, out.count.N2, out.count.N3, out.count.N4};
    if (c.p_plus != 0.0) {
        const int n_last = static_cast<int>(radius * c.gamma / M_PI) + 2;
        for (const auto& s : asymptotic_seeds(c.p_plus, c.gamma, 1, n_last)) {
            for (cd k0 : {s.k_plus, s.k_minus, I * std::conj(s.k_minus)}) {
                if (std::abs(k0) > radius + M_PI / c.gamma) continue;
                auto r = newton_zero(c, k0, o);
                if (!r.converged || r.residual > 1e-8) continue;
                int m = 1;
                try {
                    m = multiplicity_at(c, r.k, o.winding);
                } catch (const NumericalError&) {
                }
                add_pair(Zero{r.k, std::max(m, 1), quadrant_name(r.k), r.residual, r.iterations});
            }
        }
    }
    double rho = std::min(radius, 2 * M_PI / c.gamma);
    for (;;) {
        const auto have = per_quadrant();
        bool done = true;
        for (int q = 0; q < 4; ++q) {
            if (have[q] >= want[q]) continue;
            done = false;
            const double sx = (q == 0 || q == 3) ? 1.0 : -1.0, sy = q <= 1 ? 1.0 : -1.0;
            const Box b{std::min(0.0, sx * rho), std::max(0.0, sx * rho), std::min(0.0, sy * rho),
                        std::max(0.0, sy * rho)};
            std::vector<cd> known;
            auto res = find_resonances(c, b, known, o);
            for (const auto& z : res.zeros) add_pair(z);
            for (const auto& u : res.unresolved)
                if (std::max(std::abs(u.x0), std::abs(u.x1)) + std::max(std::abs(u.y0), std::abs(u.y1)) > 0.1)
                    out.set.unresolved.push_back(u);
        }
        if (done || rho >= radius) break;
        rho = std::min(radius, 2 * rho);
    }
    const auto have = per_quadrant();
    out.complete = have == want;
    std::sort(zs.begin(), zs.end(), [](const Zero& a, const Zero& b) { return std::abs(a.k) < std::abs(b.k); });
    return out;
}

ForbiddenReport forbidden_domain_check(const ResonanceSet& res, double gamma, double C_user) {
    ForbiddenReport rep;
    for (const auto& z : res.zeros)
        if (z.quadrant == "K2") rep.C_star = std::max(rep.C_star, std::abs(z.k) * std::exp(2 * gamma * z.k.real()));
    for (const auto& z : res.zeros) {
        if (z.quadrant == "K4" && rep.C_star > 0)
            rep.mirrored_max =
                std::max(rep.mirrored_max, std::abs(z.k) * std::exp(2 * gamma * z.k.imag()) / rep.C_star);
        if (C_user > 0) {
            if (z.quadrant == "K2" && std::abs(z.k) > C_user * std::exp(-2 * gamma * z.k.real()))
                rep.violations.push_back(z);
            if (z.quadrant == "K4" && std::abs(z.k) > C_user * std::exp(-2 * gamma * z.k.imag()))
                rep.violations.push_back(z);
        }
    }
    return rep;
}

}  // namespace beamres
