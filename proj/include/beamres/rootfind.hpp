#pragma once

#include <functional>
#include <string>
#include <vector>

#include "beamres/fredholm.hpp"

namespace beamres {

struct WindingOptions {
    DetOptions det{.start_order = 32, .tol = 1e-3, .max_order = 512, .extrapolate = false,
                   .route = Route::Auto, .direct_limit = 12.0, .allow_unconverged = true};
    int initial_samples = 32;  // per segment
    double density = 6.0;      // minimum samples per unit gamma * path length
    int max_samples = 1 << 14;
    double max_step = M_PI / 4;  // phase step enforced after refinement (< pi/2)
    double zero_floor = 1e-12;
    int threads = 1;
};

struct ContourCount {
    cd center;
    double radius = 0.0;
    int winding = 0;
    int samples = 0;
    double min_abs_D = 0.0;
};

// Continuous phase change of D along z(t), t in [t0,t1].
struct PhaseRun {
    double delta = 0.0;
    int samples = 0;
    double min_abs_D = INFINITY;
};
PhaseRun phase_change(const CoeffPair& c, const std::function<cd(double)>& z, double t0, double t1,
                      const WindingOptions& opts = {});

ContourCount winding_number(const CoeffPair& c, cd center, double radius, const WindingOptions& opts = {});
int winding_rect(const CoeffPair& c, double x0, double x1, double y0, double y1, const WindingOptions& opts = {},
                 double* min_abs = nullptr);

struct Seed {
    int n = 0;
    cd k_plus;   // k_n^0
    cd k_minus;  // k_{-n}^0
};
std::vector<Seed> asymptotic_seeds(double p_plus, double gamma, int n_first, int n_last);

struct Zero {
    cd k;
    int multiplicity = 1;
    std::string quadrant;
    double residual = 0.0;
    int newton_iterations = 0;
};

struct Box {
    double x0, x1, y0, y1;
};

struct ResonanceSet {
    std::vector<Zero> zeros;
    std::vector<Box> unresolved;
};

struct RootOptions {
    WindingOptions winding;
    DetOptions newton_det{.start_order = 32, .tol = 1e-8, .max_order = 512, .extrapolate = true,
                          .route = Route::Auto, .direct_limit = 12.0, .allow_unconverged = true};
    double min_box = 1e-3;
    int max_newton = 60;
    double max_newton_step = 0.25;  // in units of 1/gamma
    double newton_tol = 1e-12;
    int polish_order = 1024;  // final Newton steps on this grid
    int max_depth = 24;
};

struct NewtonResult {
    cd k;
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;  // |D(k)| / max(1, |D(k0)|) on the frozen grid
};
// Newton on D with central-difference derivative at a frozen grid.
NewtonResult newton_zero(const CoeffPair& c, cd k0, const RootOptions& opts = {});

// Multiplicity from a micro-contour of radius 1e-3 (1 + |k|).
int multiplicity_at(const CoeffPair& c, cd k, const WindingOptions& opts = {});

std::string quadrant_name(cd k);

ResonanceSet find_resonances(const CoeffPair& c, const Box& region, const std::vector<cd>& seeds = {},
                             const RootOptions& opts = {});

struct CountRow {
    double r = 0.0;
    int N = 0;
    int N1 = 0, N2 = 0, N3 = 0, N4 = 0;
    int full_circle = 0;  // annulus winding, cross-check of N
};
std::vector<CountRow> counting_function(const CoeffPair& c, const std::vector<double>& radii,
                                        const WindingOptions& opts = {});

// All zeros in 0 < |k| < radius: seeded Newton plus mirror images, then box searches outward from
// the origin in every quadrant whose sector count is not yet matched.
struct DiscResonances {
    ResonanceSet set;
    CountRow count;
    bool complete = false;
};
DiscResonances resonances_in_disc(const CoeffPair& c, double radius, const RootOptions& opts = {});

struct ForbiddenReport {
    double C_star = 0.0;
    std::vector<Zero> violations;  // only against a supplied C
    double mirrored_max = 0.0;     // max over K4 zeros of |k| e^{2 gamma Im k} / C_star
};
ForbiddenReport forbidden_domain_check(const ResonanceSet& res, double gamma, double C_user = 0.0);

}  // namespace beamres
