#include "beamres/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include <boost/math/special_functions/legendre.hpp>

#include "beamres/errors.hpp"

namespace beamres {

const std::pair<std::vector<double>, std::vector<double>>& legendre_rule(int n) {
    static std::mutex mu;
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    auto pos = boost::math::legendre_p_zeros<double>(n);
    std::vector<double> x, w;
    for (auto r = pos.rbegin(); r != pos.rend(); ++r) {
        if (*r == 0.0) continue;
        x.push_back(-*r);
    }
    for (double z : pos) x.push_back(z);
    std::sort(x.begin(), x.end());
    for (double z : x) {
        double d = boost::math::legendre_p_prime<double>(n, z);
        w.push_back(2.0 / ((1.0 - z * z) * d * d));
    }
    return cache.emplace(n, std::make_pair(std::move(x), std::move(w))).first->second;
}

Quadrature Quadrature::gauss_legendre(int n, double a, double b) {
    if (n < 1) throw InputError("quadrature order must be positive");
    const auto& [x, w] = legendre_rule(n);
    Quadrature q;
    q.order = n;
    for (int j = 0; j < n; ++j) {
        q.nodes.push_back(0.5 * (a + b) + 0.5 * (b - a) * x[j]);
        q.weights.push_back(0.5 * (b - a) * w[j]);
    }
    return q;
}

Quadrature Quadrature::composite(const std::vector<double>& breaks, int per_piece, int panel_size) {
    if (per_piece < 1) throw InputError("quadrature order must be positive");
    const int m = std::min(panel_size, per_piece);
    const int panels = (per_piece + m - 1) / m;
    Quadrature q;
    q.order = panels * m;
    const auto& [x, w] = legendre_rule(m);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double h = (breaks[i + 1] - breaks[i]) / panels;
        for (int p = 0; p < panels; ++p) {
            const double a = breaks[i] + p * h;
            for (int j = 0; j < m; ++j) {
                q.nodes.push_back(a + 0.5 * h * (1.0 + x[j]));
                q.weights.push_back(0.5 * h * w[j]);
            }
        }
    }
    return q;
}

}  // namespace beamres
