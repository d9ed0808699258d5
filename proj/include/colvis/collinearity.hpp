#pragma once

#include <vector>

#include "colvis/core.hpp"

namespace colvis {

struct CollinearityKernelConfig {
    double lambda = 5.0;      // calibration unit, in pixels of the grid the kernel runs on
    double inner_start = 5.0; // band geometry in lambda units
    double plateau_end = 10.0;
    double outer_end = 14.0;
    double half_width = 1.0;  // total band width 2 lambda
};

struct CollinearityKernelSet {
    std::vector<std::vector<double>> kernels;  // L square matrices, side^2 row-major
    int side = 0;                              // 2*ceil(outer_end*lambda)+1
    double lambda = 0.0;
    std::vector<double> thetas;

    // Nonzero taps per kernel as (dr, dc, weight), for the sparse path.
    struct Tap {
        int dr, dc;
        double w;
    };
    std::vector<std::vector<Tap>> taps;
};

struct DynamicsConfig {
    double w_col = 2.0;
    double tau_ms = 15.0;
    double dt_ms = 1.0;
    double epsilon = 1e-4;  // convergence tolerance on the max-abs rate update
    int max_steps = 200;
};

// Lateral weight matrices: for each orientation an annular band running
// along the orientation's line axis, from inner_start*lambda to
// outer_end*lambda (flat to plateau_end, then a linear ramp to zero),
// half_width*lambda across, center weight zero, weights summing to 1.
CollinearityKernelSet build_collinearity_kernels(const CollinearityKernelConfig& cfg,
                                                 const std::vector<double>& orientations);

// Per-orientation convolution with the matching lateral kernel,
// zero padding at the borders.
FeatureStack collinearity_influence(const FeatureStack& r, const CollinearityKernelSet& kernels);

struct CollinearityResult {
    FeatureStack rates;
    int steps = 0;
    double residual = 0.0;
};

// Euler-integrate tau dr/dt = -r + r_pool (1 + w_col * a(r)) from r = r_pool
// until the max-abs rate change (the gap to the relaxation target) falls
// below epsilon; the returned rates then sit within 10*epsilon of the fixed
// point with room to spare. Throws on non-convergence within max_steps.
CollinearityResult collinearity_layer(const FeatureStack& r_pool,
                                      const CollinearityKernelSet& kernels,
                                      const DynamicsConfig& dyn);

}  // namespace colvis
