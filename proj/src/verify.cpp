#include "beamres/verify.hpp"

#include <cmath>

#include "beamres/scattering.hpp"

namespace beamres {

namespace {
constexpr cd I{0.0, 1.0};

void note(IdentityReport& r, double v, cd k) {
    if (!(v <= r.max_residual)) {
        r.max_residual = v;
        r.worst_k = k;
    }
}
}  // namespace

IdentityReport symmetry_check(const CoeffPair& c, const std::vector<cd>& ks, const DetOptions& opts) {
    IdentityReport r;
    for (cd k : ks) {
        const cd a = det_D(c, k, opts).value;
        const cd b = std::conj(det_D(c, I * std::conj(k), opts).value);
        note(r, std::abs(a - b) / std::abs(a), k);
    }
    return r;
}

IdentityReport s_identity_check(const CoeffPair& c, const std::vector<double>& ks, const DetOptions& opts) {
    IdentityReport r;
    DetOptions direct = opts;
    direct.route = Route::Direct;
    for (double k : ks) {
        const cd lhs = det_D(c, I * k, direct).value;
        const cd rhs = det_D(c, k, opts).value * S_matrix(c, k, opts).S;
        note(r, std::abs(lhs - rhs) / std::max(std::abs(lhs), 1.0), k);
    }
    return r;
}

IdentityReport omega_identity_check(const CoeffPair& c, const std::vector<cd>& ks, const DetOptions& opts) {
    IdentityReport r;
    DetOptions direct = opts;
    direct.route = Route::Direct;
    for (cd k : ks) {
        const cd lhs = det_D(c, -k, direct).value;
        const cd rhs = det_D(c, k, opts).value * Omega(c, k, opts).detOmega;
        note(r, std::abs(lhs - rhs) / std::max(std::abs(lhs), 1.0), k);
    }
    return r;
}

IdentityReport trace_check(const CoeffPair& c, const std::vector<cd>& ks, int order) {
    IdentityReport r;
    const auto quad = Quadrature::composite(c.breakpoints(), order);
    for (cd k : ks) {
        const cd a = trace_matrix(build_Y0(c, k, quad));
        const cd b = trace_Y0_closed(c, k);
        note(r, std::abs(a - b) / std::max(std::abs(b), 1e-300), k);
    }
    return r;
}

IdentityReport unitarity_check(const CoeffPair& c, const std::vector<double>& ks, const DetOptions& opts) {
    IdentityReport r;
    for (double k : ks) note(r, std::abs(std::abs(S_matrix(c, k, opts).S) - 1.0), k);
    return r;
}

}  // namespace beamres
