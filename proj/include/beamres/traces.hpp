#pragma once

#include <vector>

#include "beamres/rootfind.hpp"

namespace beamres {

// D(k) = alpha k^{-m} e^{beta k} prod (1 - k/z) e^{k/z}
struct HadamardData {
    int m = 0;
    cd alpha{1.0, 0.0};
    cd beta{0.0, 0.0};       // Taylor coefficient: log(k^m D) = log alpha + beta k + O(k^2)
    cd beta_type{0.0, 0.0};  // beta + sum 1/z over the zeros used; the exponential type of D
    double radius = 0.0;  // zeros with |z| < radius enter the product
    double gamma = 1.0;
    std::vector<Zero> zeros;
};

struct HadamardOptions {
    WindingOptions winding;
    DetOptions det{.start_order = 32, .tol = 1e-10, .max_order = 1024, .extrapolate = true,
                   .route = Route::Auto, .direct_limit = 12.0, .allow_unconverged = true};
    int fit_samples = 256;
    bool check_count = true;  // compare the zero list with the winding inside radius
};

HadamardData hadamard_fit(const CoeffPair& c, const std::vector<Zero>& zeros, double radius,
                          const HadamardOptions& opts = {});

// log of the Hadamard product at k (zeros inside radius only), on the principal branch per factor.
cd hadamard_log(const HadamardData& h, cd k);

// Max |D - reconstruction| / |D| on |k| = rho.
double hadamard_residual(const CoeffPair& c, const HadamardData& h, double rho, int samples = 64,
                         const DetOptions& opts = {});

// k D'/D with a central difference at a frozen grid.
cd trace_lhs(const CoeffPair& c, cd k, const DetOptions& opts = {});

// k Tr[(I+Y0)^{-1} Y0'] with Y0' by central differences of the Nystrom matrix.
cd trace_lhs_matrix(const CoeffPair& c, cd k, int order);

struct TraceRhs {
    cd value;
    double tail_bound = 0.0;
    int terms = 0;
};
TraceRhs trace_rhs(const HadamardData& h, cd k);

// Scattering phase derivative from the zeros and from the determinant.
cd phase_derivative_rhs(const HadamardData& h, double k);
double phase_derivative_fd(const CoeffPair& c, double k, const DetOptions& opts = {});

}  // namespace beamres
