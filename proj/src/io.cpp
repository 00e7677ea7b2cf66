#include "beamres/io.hpp"

#include <charconv>
#include <fstream>
#include <regex>
#include <sstream>

#include "beamres/errors.hpp"
#include "beamres/version.hpp"

namespace beamres::io {

namespace {

const json& need(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) throw InputError(where + ": missing \"" + key + "\"");
    return j.at(key);
}

double number(const json& j, const char* key, const std::string& where) {
    const auto& v = need(j, key, where);
    if (!v.is_number()) throw InputError(where + ": \"" + key + "\" must be a number");
    return v.get<double>();
}

}  // namespace

json parse_json(const std::string& text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::ostringstream os;
        os << source << ": JSON parse error at byte " << e.byte << ": " << e.what();
        throw InputError(os.str());
    }
}

json load_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path + ": cannot open");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json(ss.str(), path);
}

void save_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw InputError(path + ": cannot write");
    out << j.dump(2) << "\n";
}

CompactCoeff coeff_from_json(const json& j, const std::string& where) {
    const double g = number(j, "support_end", where);
    const auto& pieces = need(j, "pieces", where);
    if (!pieces.is_array()) throw InputError(where + ": \"pieces\" must be an array");
    const std::string basis = j.value("basis", std::string("monomial"));
    if (basis != "monomial" && basis != "chebyshev") throw InputError(where + ": unknown basis \"" + basis + "\"");
    std::vector<MonomialPiece> mono;
    std::vector<Piece> cheb;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const std::string w = where + ": pieces[" + std::to_string(i) + "]";
        const auto& p = pieces[i];
        const auto& cs = need(p, "coeffs", w);
        if (!cs.is_array() || cs.empty()) throw InputError(w + ": \"coeffs\" must be a non-empty array");
        std::vector<double> v;
        for (const auto& x : cs) {
            if (!x.is_number()) throw InputError(w + ": coefficients must be numbers");
            v.push_back(x.get<double>());
        }
        if (basis == "monomial")
            mono.push_back({number(p, "x0", w), number(p, "x1", w), v});
        else
            cheb.push_back({number(p, "x0", w), number(p, "x1", w), v});
    }
    try {
        return basis == "monomial" ? CompactCoeff::from_monomial(g, mono) : CompactCoeff(g, cheb);
    } catch (const InputError& e) {
        throw InputError(where + ": " + e.what());
    }
}

json coeff_to_json(const CompactCoeff& f) {
    json j;
    j["support_end"] = f.support_end();
    j["basis"] = "chebyshev";
    j["pieces"] = json::array();
    for (const auto& p : f.pieces()) j["pieces"].push_back({{"x0", p.x0}, {"x1", p.x1}, {"coeffs", p.cheb}});
    return j;
}

CoeffPair pq_from_json(const json& j, const std::string& where) {
    if (!j.is_object() || (!j.contains("p") && !j.contains("q")))
        throw InputError(where + ": expected an object with \"p\" and/or \"q\"");
    CompactCoeff p, q;
    if (j.contains("p")) p = coeff_from_json(j["p"], where + ": p");
    if (j.contains("q")) q = coeff_from_json(j["q"], where + ": q");
    if (!j.contains("p")) p = CompactCoeff::zero(q.support_end());
    if (!j.contains("q")) q = CompactCoeff::zero(p.support_end());
    return CoeffPair(p, q);
}

json pq_to_json(const CoeffPair& c) {
    return {{"gamma", c.gamma}, {"p", coeff_to_json(c.p)}, {"q", coeff_to_json(c.q)}};
}

BeamCoeffs beam_from_json(const json& j, const std::string& where) {
    BeamCoeffs b;
    b.a_off = coeff_from_json(need(j, "a", where), where + ": a");
    b.b_off = coeff_from_json(need(j, "b", where), where + ": b");
    b.validate();
    return b;
}

std::vector<cd> grid_from_json(const json& j, const std::string& where) {
    std::vector<cd> out;
    if (j.is_object() && j.contains("points")) {
        const auto& pts = j["points"];
        if (!pts.is_array()) throw InputError(where + ": \"points\" must be an array");
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const std::string w = where + ": points[" + std::to_string(i) + "]";
            out.emplace_back(number(pts[i], "re", w), number(pts[i], "im", w));
        }
    } else if (j.is_object() && j.contains("rect")) {
        const auto& r = j["rect"];
        const double x0 = number(r, "x0", where), x1 = number(r, "x1", where);
        const double y0 = number(r, "y0", where), y1 = number(r, "y1", where);
        const int nx = static_cast<int>(number(j, "nx", where)), ny = static_cast<int>(number(j, "ny", where));
        if (nx < 1 || ny < 1) throw InputError(where + ": nx and ny must be positive");
        for (int a = 0; a < nx; ++a)
            for (int b = 0; b < ny; ++b)
                out.emplace_back(nx == 1 ? x0 : x0 + (x1 - x0) * a / (nx - 1),
                                 ny == 1 ? y0 : y0 + (y1 - y0) * b / (ny - 1));
    } else {
        throw InputError(where + ": grid needs \"points\" or \"rect\"");
    }
    return out;
}

std::vector<Zero> zeros_from_json(const json& j, const std::string& where) {
    const auto& zs = need(j, "zeros", where);
    if (!zs.is_array()) throw InputError(where + ": \"zeros\" must be an array");
    std::vector<Zero> out;
    for (std::size_t i = 0; i < zs.size(); ++i) {
        const std::string w = where + ": zeros[" + std::to_string(i) + "]";
        Zero z;
        z.k = cd(number(zs[i], "re", w), number(zs[i], "im", w));
        z.multiplicity = zs[i].value("mult", 1);
        z.quadrant = quadrant_name(z.k);
        z.residual = zs[i].value("residual", 0.0);
        out.push_back(z);
    }
    return out;
}

json zeros_to_json(const std::vector<Zero>& zs) {
    json a = json::array();
    for (const auto& z : zs)
        a.push_back({{"re", z.k.real()},
                     {"im", z.k.imag()},
                     {"mult", z.multiplicity},
                     {"quadrant", z.quadrant},
                     {"residual", z.residual}});
    return a;
}

cd parse_complex(const std::string& s) {
    static const std::string num = R"((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)";
    static const std::regex imag_only("^\\s*([+-]?)\\s*(" + num + ")?\\s*[ij]\\s*$");
    static const std::regex full("^\\s*([+-]?" + num + ")\\s*(?:([+-])\\s*(" + num + ")?\\s*[ij])?\\s*$");
    std::smatch m;
    if (std::regex_match(s, m, imag_only)) {
        const double v = m[2].matched ? std::stod(m[2]) : 1.0;
        return {0.0, m[1] == "-" ? -v : v};
    }
    if (!std::regex_match(s, m, full)) throw InputError("cannot parse complex number \"" + s + "\"");
    double im_part = 0.0;
    if (m[2].matched) {
        im_part = m[3].matched ? std::stod(m[3]) : 1.0;
        if (m[2] == "-") im_part = -im_part;
    }
    return {std::stod(m[1]), im_part};
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        double v = 0.0;
        const char* b = item.data();
        while (*b == ' ') ++b;
        auto [ptr, ec] = std::from_chars(b, item.data() + item.size(), v);
        if (ec != std::errc() || ptr != item.data() + item.size())
            throw InputError("cannot parse number \"" + item + "\" in list \"" + s + "\"");
        out.push_back(v);
    }
    if (out.empty()) throw InputError("empty list");
    return out;
}

std::string fmt(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, ptr);
}

CsvWriter::CsvWriter(std::ostream& os, const json& config, const std::vector<std::string>& columns) : os_(os) {
    os_ << "# beamres " << version << "\n# config " << config.dump() << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) os_ << (i ? "," : "") << columns[i];
    os_ << "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) os_ << (i ? "," : "") << fmt(values[i]);
    os_ << "\n";
}

}  // namespace beamres::io
