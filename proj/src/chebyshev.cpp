#include "beamres/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace beamres::cheb {

std::vector<double> lobatto_points(double a, double b, int n) {
    std::vector<double> x(n);
    if (n == 1) {
        x[0] = 0.5 * (a + b);
        return x;
    }
    for (int j = 0; j < n; ++j) {
        double s = -std::cos(std::numbers::pi * j / (n - 1));
        x[j] = 0.5 * (a + b) + 0.5 * (b - a) * s;
    }
    x.front() = a;
    x.back() = b;
    return x;
}

std::vector<double> fit_values(const std::vector<double>& v) {
    const int n = static_cast<int>(v.size());
    if (n == 1) return {v[0]};
    const int m = n - 1;
    std::vector<double> c(n, 0.0);
    // points run from -1 to 1, i.e. s_j = cos(pi (m-j)/m)
    for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) {
            double w = (j == 0 || j == m) ? 0.5 : 1.0;
            acc += w * v[j] * std::cos(std::numbers::pi * k * (m - j) / m);
        }
        c[k] = 2.0 * acc / m;
    }
    c[0] *= 0.5;
    c[m] *= 0.5;
    return c;
}

std::vector<double> fit(const std::function<double(double)>& f, double a, double b, int n) {
    auto x = lobatto_points(a, b, n);
    std::vector<double> v(n);
    for (int j = 0; j < n; ++j) v[j] = f(x[j]);
    return fit_values(v);
}

double eval(const std::vector<double>& c, double a, double b, double x) {
    double s = (2.0 * x - a - b) / (b - a);
    double b1 = 0.0, b2 = 0.0;
    for (int k = static_cast<int>(c.size()) - 1; k >= 1; --k) {
        double t = 2.0 * s * b1 - b2 + c[k];
        b2 = b1;
        b1 = t;
    }
    return s * b1 - b2 + c[0];
}

std::vector<double> derivative(const std::vector<double>& c, double a, double b) {
    const int n = static_cast<int>(c.size());
    if (n <= 1) return {0.0};
    std::vector<double> d(n - 1, 0.0);
    // d_{k-1} = d_{k+1} + 2k c_k
    for (int k = n - 1; k >= 1; --k) {
        double next = (k + 1 <= n - 2) ? d[k + 1] : 0.0;
        d[k - 1] = next + 2.0 * k * c[k];
    }
    d[0] *= 0.5;
    const double scale = 2.0 / (b - a);
    for (auto& v : d) v *= scale;
    return d;
}

double integral(const std::vector<double>& c, double a, double b) {
    double acc = 0.0;
    for (std::size_t k = 0; k < c.size(); k += 2) acc += c[k] * 2.0 / (1.0 - double(k * k));
    return 0.5 * (b - a) * acc;
}

void trim(std::vector<double>& c, double tol) {
    double mx = 0.0;
    for (double v : c) mx = std::max(mx, std::abs(v));
    while (c.size() > 1 && std::abs(c.back()) <= tol * mx) c.pop_back();
}

}  // namespace beamres::cheb
