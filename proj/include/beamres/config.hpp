#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "beamres/io.hpp"

namespace beamres {

// Everything a CLI run depends on; embedded in every artifact.
struct RunConfig {
    std::string command;
    std::map<std::string, std::string> inputs;  // role -> path
    double tol = 1e-10;
    int order = 32;
    int max_order = 1024;
    int threads = 1;
    std::vector<double> radii;
    std::vector<double> rect;  // x0, x1, y0, y1
    std::string k;
    double kmin = 0.5;
    double kmax = 30.0;
    int n = 600;
    std::uint64_t seed = 1;
    std::string out;

    void validate() const;
    io::json to_json() const;
    static RunConfig from_json(const io::json& j);
};

}  // namespace beamres
