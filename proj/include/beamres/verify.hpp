#pragma once

#include <vector>

#include "beamres/fredholm.hpp"
#include "beamres/scattering.hpp"

namespace beamres {

// Max residuals of the structural identities over sample sets; each relative to max(|lhs|, 1)
// unless stated otherwise.
struct IdentityReport {
    double max_residual = 0.0;
    cd worst_k;
};

// |D(k) - conj D(i conj k)| / |D(k)|
IdentityReport symmetry_check(const CoeffPair& c, const std::vector<cd>& ks, const DetOptions& opts = {});
// D(ik) = D(k) S(k), k > 0
IdentityReport s_identity_check(const CoeffPair& c, const std::vector<double>& ks, const DetOptions& opts = {});
// D(-k) = D(k) det Omega(k), k in the first quadrant; D(-k) evaluated directly
IdentityReport omega_identity_check(const CoeffPair& c, const std::vector<cd>& ks, const DetOptions& opts = {});
// Nystrom trace of Y0 against the closed form, relative
IdentityReport trace_check(const CoeffPair& c, const std::vector<cd>& ks, int order = 64);
// ||S(k)| - 1|, k > 0
IdentityReport unitarity_check(const CoeffPair& c, const std::vector<double>& ks,
                               const DetOptions& opts = scattering_defaults);

}  // namespace beamres
