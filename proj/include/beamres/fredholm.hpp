#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "beamres/coeffs.hpp"
#include "beamres/kernels.hpp"
#include "beamres/quadrature.hpp"

namespace beamres {

// Nystrom image of Y0(k) with symmetric weight splitting. The p-block comes first when present.
struct NystromBlock {
    cd k;
    Eigen::MatrixXcd Y;
    bool has_p = false;
    bool has_q = false;
    Eigen::VectorXd x, sw;
    Eigen::VectorXd L1, R1, L2, R2;

    int n() const { return static_cast<int>(x.size()); }
    int side() const { return static_cast<int>(Y.rows()); }
    int q_offset() const { return has_p ? n() : 0; }
};

NystromBlock build_Y0(const CoeffPair& c, cd k, const Quadrature& quad);

// How D(k) is obtained away from the first quadrant.
enum class Route {
    Auto,       // direct while the kernel growth is mild, otherwise continued
    Direct,     // det(I + Y0(k)) at k itself
    Continued,  // from the reflected first-quadrant point via S or Omega
};

struct DetOptions {
    int start_order = 32;  // nodes per piece at the first level
    double tol = 1e-10;
    int max_order = 1024;
    bool extrapolate = true;      // Richardson in the panel width
    Route route = Route::Auto;
    double direct_limit = 12.0;   // largest gamma*max((-Re k)_+, (-Im k)_+) evaluated directly
    bool allow_unconverged = false;
};

struct DetSample {
    cd k;
    cd value;
    cd log_value;  // log|D| + i arg D, arg only meaningful modulo 2 pi
    int order = 0;
    double err_est = 0.0;
    bool converged = true;
    Route route = Route::Direct;
};

// Route actually used for k under the given options.
Route resolve_route(const CoeffPair& c, cd k, const DetOptions& opts);

DetSample det_D(const CoeffPair& c, cd k, const DetOptions& opts = {});

// log D at a fixed order per piece, optionally extrapolated from the coarser levels order/2, order/4.
cd log_det_at(const CoeffPair& c, cd k, int order, Route route, bool extrapolate);

// log det of a square matrix via partial-pivoting LU.
cd log_det(const Eigen::MatrixXcd& A);

cd trace_matrix(const NystromBlock& b);

// int_0^gamma e^{2ikx} f(x) dx.
cd fourier_hat(const CompactCoeff& f, cd k);

cd trace_Y0_closed(const CoeffPair& c, cd k);

struct AsymptoticReport {
    double radius = 0.0;
    cd fitted;
    cd expected;
    double deviation = 0.0;  // relative when expected != 0
    std::vector<cd> ks;
    std::vector<cd> scaled;  // k (D(k) - 1)
};

AsymptoticReport log_det_asymptotic_check(const CoeffPair& c, double radius, int samples = 33,
                                          DetOptions opts = {.tol = 1e-7});  // the fit needs far less than the default

}  // namespace beamres
