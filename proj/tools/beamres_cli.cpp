#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>

#include "CLI11.hpp"

#include "beamres/config.hpp"
#include "beamres/errors.hpp"
#include "beamres/io.hpp"
#include "beamres/oracle.hpp"
#include "beamres/parallel.hpp"
#include "beamres/rootfind.hpp"
#include "beamres/scattering.hpp"
#include "beamres/traces.hpp"
#include "beamres/verify.hpp"
#include "beamres/version.hpp"

using namespace beamres;
using io::json;

namespace {

constexpr cd I{0.0, 1.0};

// Output sink: the --out file, or stdout.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw InputError(path + ": cannot write");
        }
    }
    std::ostream& os() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

json envelope(const RunConfig& cfg) { return {{"version", version}, {"config", cfg.to_json()}}; }

void write_json(const RunConfig& cfg, const json& j) {
    Sink s(cfg.out);
    s.os() << j.dump(2) << "\n";
}

std::string input(const RunConfig& cfg, const std::string& role) {
    auto it = cfg.inputs.find(role);
    if (it == cfg.inputs.end() || it->second.empty()) throw InputError(cfg.command + " needs --" + role);
    return it->second;
}

CoeffPair load_pq(const RunConfig& cfg) {
    const auto path = input(cfg, "pq");
    return io::pq_from_json(io::load_json(path), path);
}

DetOptions det_options(const RunConfig& cfg) {
    DetOptions o;
    o.tol = cfg.tol;
    o.start_order = cfg.order;
    o.max_order = cfg.max_order;
    return o;
}

RootOptions root_options(const RunConfig& cfg) {
    RootOptions o;
    o.winding.threads = cfg.threads;
    o.winding.det.max_order = cfg.max_order;
    o.newton_det = det_options(cfg);
    o.newton_det.allow_unconverged = true;
    return o;
}

std::vector<cd> sorted_grid(const RunConfig& cfg) {
    const auto path = input(cfg, "grid");
    auto ks = io::grid_from_json(io::load_json(path), path);
    std::sort(ks.begin(), ks.end(), [](cd a, cd b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
    return ks;
}

json plan(const RunConfig& cfg) {
    json p;
    const auto& c = cfg.command;
    if (c == "det" || c == "oracle") {
        const auto ks = sorted_grid(cfg);
        p["points"] = ks.size();
    }
    if (c == "det") {
        const auto pq = load_pq(cfg);
        int direct = 0, continued = 0;
        for (cd k : sorted_grid(cfg)) (resolve_route(pq, k, det_options(cfg)) == Route::Direct ? direct : continued)++;
        p["gamma"] = pq.gamma;
        p["direct"] = direct;
        p["continued"] = continued;
        p["orders"] = {cfg.order, cfg.max_order};
    }
    if (c == "count" || c == "trace") p["radii"] = cfg.radii;
    if (c == "resonances") {
        if (!cfg.rect.empty()) p["rect"] = cfg.rect;
        else p["disc_radius"] = cfg.radii.empty() ? 0.0 : cfg.radii.back();
    }
    if (c == "scatter") p["k"] = {cfg.kmin, cfg.kmax, cfg.n};
    if (c == "transform") p["grid_order"] = cfg.order;
    if (c == "verify") p["checks"] = {"symmetry", "s_identity", "omega_identity", "trace_closed_form", "unitarity"};
    return p;
}

void run_transform(const RunConfig& cfg) {
    const auto path = input(cfg, "beam");
    const auto beam = io::beam_from_json(io::load_json(path), path);
    const auto data = liouville_data(beam, cfg.order);
    json j = envelope(cfg);
    j["gamma"] = data.pq.gamma;
    j["kappa_integral"] = data.kappa.integral();
    j["p"] = io::coeff_to_json(data.pq.p);
    j["q"] = io::coeff_to_json(data.pq.q);
    write_json(cfg, j);
}

void run_det(const RunConfig& cfg) {
    const auto pq = load_pq(cfg);
    const auto ks = sorted_grid(cfg);
    const auto o = det_options(cfg);
    const auto rows = parallel_map<DetSample>(ks.size(), cfg.threads, [&](std::size_t i) { return det_D(pq, ks[i], o); });
    Sink s(cfg.out);
    io::CsvWriter w(s.os(), cfg.to_json(), {"re_k", "im_k", "re_D", "im_D", "err_est", "N"});
    for (const auto& r : rows) w.row({r.k.real(), r.k.imag(), r.value.real(), r.value.imag(), r.err_est, double(r.order)});
}

void run_resonances(const RunConfig& cfg) {
    const auto pq = load_pq(cfg);
    const auto o = root_options(cfg);
    json j = envelope(cfg);
    ResonanceSet set;
    if (!cfg.rect.empty()) {
        const Box b{cfg.rect[0], cfg.rect[1], cfg.rect[2], cfg.rect[3]};
        std::vector<cd> seeds;
        if (pq.p_plus != 0.0) {
            const double far = std::max({std::abs(b.x0), std::abs(b.x1), std::abs(b.y0), std::abs(b.y1)}) * 2;
            for (const auto& s : asymptotic_seeds(pq.p_plus, pq.gamma, 1, int(far * pq.gamma / M_PI) + 2)) {
                seeds.push_back(s.k_plus);
                seeds.push_back(s.k_minus);
            }
        }
        set = find_resonances(pq, b, seeds, o);
    } else if (!cfg.radii.empty()) {
        auto d = resonances_in_disc(pq, cfg.radii.back(), o);
        set = d.set;
        j["complete"] = d.complete;
        j["counts"] = {d.count.N1, d.count.N2, d.count.N3, d.count.N4};
    } else {
        throw InputError("resonances needs --rect or --radii");
    }
    j["zeros"] = io::zeros_to_json(set.zeros);
    j["unresolved"] = json::array();
    for (const auto& b : set.unresolved) j["unresolved"].push_back({b.x0, b.x1, b.y0, b.y1});
    const auto fd = forbidden_domain_check(set, pq.gamma);
    j["forbidden_domain"] = {{"C_star", fd.C_star}, {"mirrored_max", fd.mirrored_max}};
    write_json(cfg, j);
}

void run_count(const RunConfig& cfg) {
    const auto pq = load_pq(cfg);
    if (cfg.radii.empty()) throw InputError("count needs --radii");
    const auto rows = counting_function(pq, cfg.radii, root_options(cfg).winding);
    Sink s(cfg.out);
    io::CsvWriter w(s.os(), cfg.to_json(), {"r", "N", "N1", "N2", "N3", "N4", "full_circle"});
    for (const auto& r : rows)
        w.row({r.r, double(r.N), double(r.N1), double(r.N2), double(r.N3), double(r.N4), double(r.full_circle)});
}

void run_scatter(const RunConfig& cfg) {
    const auto pq = load_pq(cfg);
    const auto o = det_options(cfg);
    std::vector<double> ks(cfg.n);
    for (int i = 0; i < cfg.n; ++i) ks[i] = cfg.kmin + (cfg.kmax - cfg.kmin) * i / (cfg.n - 1);
    const auto ph = scattering_phase(pq, ks, o);
    const auto res = parallel_map<double>(ks.size(), cfg.threads, [&](std::size_t i) {
        return s_identity_check(pq, {ks[i]}, o).max_residual;
    });
    Sink s(cfg.out);
    io::CsvWriter w(s.os(), cfg.to_json(), {"k", "re_S", "im_S", "phi", "identity_residual"});
    for (std::size_t i = 0; i < ks.size(); ++i) w.row({ks[i], ph.S[i].real(), ph.S[i].imag(), ph.phi[i], res[i]});
}

void run_trace(const RunConfig& cfg) {
    const auto pq = load_pq(cfg);
    if (cfg.k.empty()) throw InputError("trace needs --k");
    if (cfg.radii.empty()) throw InputError("trace needs --radii");
    const cd k = io::parse_complex(cfg.k);
    std::vector<Zero> zeros;
    if (cfg.inputs.count("res") && !cfg.inputs.at("res").empty()) {
        const auto path = cfg.inputs.at("res");
        zeros = io::zeros_from_json(io::load_json(path), path);
    } else {
        zeros = resonances_in_disc(pq, cfg.radii.back(), root_options(cfg)).set.zeros;
    }
    HadamardOptions ho;
    ho.winding = root_options(cfg).winding;
    const cd lhs = trace_lhs(pq, k, det_options(cfg));
    json j = envelope(cfg);
    j["k"] = {k.real(), k.imag()};
    j["lhs"] = {lhs.real(), lhs.imag()};
    j["radii"] = json::array();
    for (double r : cfg.radii) {
        const auto h = hadamard_fit(pq, zeros, r, ho);
        const auto rhs = trace_rhs(h, k);
        j["radii"].push_back({{"radius", r},
                              {"m", h.m},
                              {"alpha", {h.alpha.real(), h.alpha.imag()}},
                              {"beta", {h.beta.real(), h.beta.imag()}},
                              {"beta_type", {h.beta_type.real(), h.beta_type.imag()}},
                              {"zeros", rhs.terms},
                              {"rhs", {rhs.value.real(), rhs.value.imag()}},
                              {"tail_bound", rhs.tail_bound},
                              {"residual", std::abs(lhs - rhs.value)}});
    }
    if (pq.p_plus != 0.0 && !j["radii"].empty()) {
        const auto& last = j["radii"].back()["beta_type"];
        const cd bt(last[0].get<double>(), last[1].get<double>()), ref = cd(-1.0, 1.0) * pq.gamma;
        if (std::abs(bt - ref) > 0.1 * std::abs(ref))
            std::cerr << "warning: exponential type " << bt << " differs from (i-1) gamma by more than 10%\n";
    }
    write_json(cfg, j);
}

void run_oracle(const RunConfig& cfg) {
    const auto path = input(cfg, "p");
    const auto doc = io::load_json(path);
    const auto p = io::coeff_from_json(doc.contains("p") ? doc["p"] : doc, path);
    const auto ks = sorted_grid(cfg);
    struct Row {
        cd k, d, D;
    };
    const auto rows = parallel_map<Row>(ks.size(), cfg.threads, [&](std::size_t i) {
        const cd d = jost_d(p, ks[i], cfg.tol).d;
        return Row{ks[i], d, jost_d(p, I * ks[i], cfg.tol).d * d};
    });
    Sink s(cfg.out);
    io::CsvWriter w(s.os(), cfg.to_json(), {"re_k", "im_k", "re_d", "im_d", "re_D", "im_D"});
    for (const auto& r : rows) w.row({r.k.real(), r.k.imag(), r.d.real(), r.d.imag(), r.D.real(), r.D.imag()});
}

void run_verify(const RunConfig& cfg, int& status) {
    CoeffPair pq;
    if (cfg.inputs.count("pq") && !cfg.inputs.at("pq").empty())
        pq = load_pq(cfg);
    else
        pq = CoeffPair(CompactCoeff::step(2.0, 0.0, 1.0, 1.0), CompactCoeff::zero(1.0));
    const auto o = det_options(cfg);
    auto os = o;  // unitarity is checked to 1e-8, so S needs less than D
    os.tol = std::max(o.tol, scattering_defaults.tol);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double g = pq.gamma;
    auto polar_sample = [&](double r0, double r1, double a0, double a1) {
        return std::polar((r0 + (r1 - r0) * u(rng)) / g, a0 + (a1 - a0) * u(rng));
    };
    std::vector<cd> sym, quad1, tr;
    for (int i = 0; i < 50; ++i) sym.push_back(polar_sample(1.0, 8.0, -M_PI, M_PI));
    for (int i = 0; i < 10; ++i) quad1.push_back(polar_sample(0.5, 3.0, 0.05, M_PI / 2 - 0.05));
    for (int i = 0; i < 10; ++i) tr.push_back(polar_sample(0.5, 20.0, 0.0, M_PI / 2));
    std::vector<double> s_ks, real_ks;
    for (int k = 1; k <= 8; ++k) s_ks.push_back(k / g);
    for (int i = 0; i < 50; ++i) real_ks.push_back((0.5 + 19.5 * u(rng)) / g);

    struct Check {
        const char* name;
        IdentityReport r;
        double threshold;
    };
    const std::vector<Check> checks{
        {"symmetry", symmetry_check(pq, sym, o), 1e-9},
        {"s_identity", s_identity_check(pq, s_ks, o), 1e-7},
        {"omega_identity", omega_identity_check(pq, quad1, o), 1e-7},
        {"trace_closed_form", trace_check(pq, tr), 1e-8},
        {"unitarity", unitarity_check(pq, real_ks, os), 1e-8},
    };
    json j = envelope(cfg);
    j["checks"] = json::array();
    bool ok = true;
    for (const auto& c : checks) {
        const bool pass = c.r.max_residual < c.threshold;
        ok = ok && pass;
        j["checks"].push_back({{"name", c.name},
                               {"max_residual", c.r.max_residual},
                               {"worst_k", {c.r.worst_k.real(), c.r.worst_k.imag()}},
                               {"threshold", c.threshold},
                               {"pass", pass}});
    }
    j["pass"] = ok;
    write_json(cfg, j);
    if (!ok) status = 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fredholm determinants, resonances and trace formulas for fourth-order operators on the half-line"};
    app.set_version_flag("--version", version);
    app.require_subcommand(1);

    RunConfig cfg;
    bool dry = false;
    std::string config_path, radii, rect, out_path;
    std::map<std::string, std::string> paths;

    auto common = [&](CLI::App* s, int default_order) {
        s->add_option("--tol", cfg.tol, "relative tolerance")->capture_default_str();
        s->add_option("--order", cfg.order, "starting nodes per coefficient piece")->default_str(std::to_string(default_order));
        s->add_option("--max-order", cfg.max_order, "largest nodes per piece");
        s->add_option("--threads", cfg.threads, "worker threads");
        s->add_option("--out", out_path, "output file (default stdout)");
        s->add_flag("--dry-run", dry, "print the resolved plan and exit");
        s->add_option("--config", config_path, "read the run configuration from a JSON file or artifact");
    };
    auto path_opt = [&](CLI::App* s, const std::string& role, const std::string& help) {
        s->add_option("--" + role, paths[role], help);
    };

    auto* transform = app.add_subcommand("transform", "Liouville transform of beam data to (p, q)");
    common(transform, 64);
    path_opt(transform, "beam", "beam JSON with a and b offsets");

    auto* det = app.add_subcommand("det", "determinant on a grid of k");
    common(det, 32);
    path_opt(det, "pq", "coefficient JSON");
    path_opt(det, "grid", "grid JSON");

    auto* res = app.add_subcommand("resonances", "zeros of D in a box or a disc");
    common(res, 32);
    path_opt(res, "pq", "coefficient JSON");
    res->add_option("--rect", rect, "x0,x1,y0,y1");
    res->add_option("--radii", radii, "disc radius (the last value is used)");

    auto* count = app.add_subcommand("count", "zero counts per quadrant");
    common(count, 32);
    path_opt(count, "pq", "coefficient JSON");
    count->add_option("--radii", radii, "comma-separated radii");

    auto* scatter = app.add_subcommand("scatter", "S(k) and the scattering phase on k > 0");
    common(scatter, 32);
    path_opt(scatter, "pq", "coefficient JSON");
    scatter->add_option("--kmin", cfg.kmin);
    scatter->add_option("--kmax", cfg.kmax);
    scatter->add_option("--n", cfg.n);

    auto* trace = app.add_subcommand("trace", "both sides of the resonance trace formula");
    common(trace, 32);
    path_opt(trace, "pq", "coefficient JSON");
    path_opt(trace, "res", "resonance JSON (computed when absent)");
    trace->add_option("--k", cfg.k, "evaluation point, e.g. 2+2i");
    trace->add_option("--radii", radii, "truncation radii");

    auto* oracle = app.add_subcommand("oracle", "second-order Jost function d(k) and d(ik) d(k)");
    common(oracle, 32);
    path_opt(oracle, "p", "coefficient JSON for p, or a pq file");
    path_opt(oracle, "grid", "grid JSON");

    auto* verify = app.add_subcommand("verify", "identity checks with residual report");
    common(verify, 32);
    path_opt(verify, "pq", "coefficient JSON (default: step p = 2 on [0,1])");
    verify->add_option("--seed", cfg.seed, "seed for random sample points");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    int status = 0;
    try {
        const auto* sub = app.get_subcommands().front();
        if (!config_path.empty()) {
            const auto doc = io::load_json(config_path);
            cfg = RunConfig::from_json(doc.contains("config") ? doc["config"] : doc);
            if (cfg.command != sub->get_name())
                throw InputError(config_path + ": config is for \"" + cfg.command + "\", not \"" + sub->get_name() + "\"");
        } else {
            cfg.command = sub->get_name();
            if (sub->count("--order") == 0 && cfg.command == "transform") cfg.order = 64;
            for (const auto& [role, path] : paths)
                if (!path.empty()) cfg.inputs[role] = path;
            if (!radii.empty()) cfg.radii = io::parse_list(radii);
            if (!rect.empty()) cfg.rect = io::parse_list(rect);
        }
        if (!out_path.empty()) cfg.out = out_path;
        cfg.validate();
        if (dry) {
            json j = envelope(cfg);
            j["plan"] = plan(cfg);
            std::cout << j.dump(2) << "\n";
            return 0;
        }
        const auto& c = cfg.command;
        if (c == "transform") run_transform(cfg);
        else if (c == "det") run_det(cfg);
        else if (c == "resonances") run_resonances(cfg);
        else if (c == "count") run_count(cfg);
        else if (c == "scatter") run_scatter(cfg);
        else if (c == "trace") run_trace(cfg);
        else if (c == "oracle") run_oracle(cfg);
        else if (c == "verify") run_verify(cfg, status);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
    return status;
}
