#include "beamres/config.hpp"

#include <algorithm>

#include "beamres/errors.hpp"

namespace beamres {

void RunConfig::validate() const {
    if (!(tol > 0)) throw InputError("tolerance must be positive");
    if (order < 1 || max_order < order) throw InputError("need 1 <= order <= max_order");
    if (threads < 1) throw InputError("threads must be at least 1");
    if (!std::is_sorted(radii.begin(), radii.end()) ||
        std::adjacent_find(radii.begin(), radii.end()) != radii.end())
        throw InputError("radii must be sorted ascending");
    for (double r : radii)
        if (!(r > 0)) throw InputError("radii must be positive");
    if (!rect.empty() && (rect.size() != 4 || !(rect[1] > rect[0]) || !(rect[3] > rect[2])))
        throw InputError("rect must be x0,x1,y0,y1 with x0 < x1 and y0 < y1");
    if (!(kmin > 0) || !(kmax > kmin) || n < 2) throw InputError("need 0 < kmin < kmax and n >= 2");
}

io::json RunConfig::to_json() const {
    io::json j;
    j["command"] = command;
    j["inputs"] = inputs;
    j["tol"] = tol;
    j["order"] = order;
    j["max_order"] = max_order;
    j["threads"] = threads;
    j["radii"] = radii;
    j["rect"] = rect;
    j["k"] = k;
    j["kmin"] = kmin;
    j["kmax"] = kmax;
    j["n"] = n;
    j["seed"] = seed;
    j["out"] = out;
    return j;
}

RunConfig RunConfig::from_json(const io::json& j) {
    RunConfig c;
    try {
        c.command = j.at("command").get<std::string>();
        c.inputs = j.value("inputs", c.inputs);
        c.tol = j.value("tol", c.tol);
        c.order = j.value("order", c.order);
        c.max_order = j.value("max_order", c.max_order);
        c.threads = j.value("threads", c.threads);
        c.radii = j.value("radii", c.radii);
        c.rect = j.value("rect", c.rect);
        c.k = j.value("k", c.k);
        c.kmin = j.value("kmin", c.kmin);
        c.kmax = j.value("kmax", c.kmax);
        c.n = j.value("n", c.n);
        c.seed = j.value("seed", c.seed);
        c.out = j.value("out", c.out);
    } catch (const io::json::exception& e) {
        throw InputError(std::string("bad config: ") + e.what());
    }
    return c;
}

}  // namespace beamres
