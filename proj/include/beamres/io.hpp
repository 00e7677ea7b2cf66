#pragma once

#include <complex>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "beamres/coeffs.hpp"
#include "beamres/rootfind.hpp"

namespace beamres::io {

using json = nlohmann::ordered_json;

// Parse a file; syntax errors name the file and the byte offset.
json load_json(const std::string& path);
json parse_json(const std::string& text, const std::string& source);
void save_json(const std::string& path, const json& j);

// {"support_end": g, "pieces": [{"x0", "x1", "coeffs": [...]}], "basis": "monomial"|"chebyshev"}
CompactCoeff coeff_from_json(const json& j, const std::string& where);
json coeff_to_json(const CompactCoeff& f);

// {"p": coeff, "q": coeff}; a missing entry is zero.
CoeffPair pq_from_json(const json& j, const std::string& where);
json pq_to_json(const CoeffPair& c);

// {"a": coeff, "b": coeff}, offsets from 1.
BeamCoeffs beam_from_json(const json& j, const std::string& where);

// {"points": [{"re", "im"}]} or {"rect": {"x0","x1","y0","y1"}, "nx", "ny"}
std::vector<cd> grid_from_json(const json& j, const std::string& where);

// {"zeros": [{"re", "im", "mult", "quadrant", "residual"}]}
std::vector<Zero> zeros_from_json(const json& j, const std::string& where);
json zeros_to_json(const std::vector<Zero>& zs);

cd parse_complex(const std::string& s);
std::vector<double> parse_list(const std::string& s);

// 17 significant digits, no locale.
std::string fmt(double v);

// CSV with a commented header carrying the version and the config.
class CsvWriter {
public:
    CsvWriter(std::ostream& os, const json& config, const std::vector<std::string>& columns);
    void row(const std::vector<double>& values);

private:
    std::ostream& os_;
};

}  // namespace beamres::io
