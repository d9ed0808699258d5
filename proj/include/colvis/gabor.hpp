#pragma once

#include <vector>

#include "colvis/core.hpp"

namespace colvis {

struct GaborConfig {
    int kernel_size = 11;              // K, odd
    std::vector<double> orientations;  // radians; empty -> 8 angles {0, 0.25pi, ..., 1.75pi}
    double psi = 0.0;                  // phase; pi/2 gives the odd (dark-bright edge) detector
    double frequency = 0.0;            // cycles/pixel; <= 0 -> 1/lambda_from_kernel(K)
    double sigma1 = 0.0;               // pixels; <= 0 -> 0.4 * K
    double sigma2 = 0.0;
    bool fold_symmetric = false;       // drop the theta+pi duplicates of an even bank

    std::vector<double> resolved_orientations() const;
    double resolved_frequency() const;
    double resolved_sigma1() const;
    double resolved_sigma2() const;
};

struct GaborBank {
    std::vector<std::vector<double>> kernels;  // L kernels, each K*K row-major
    std::vector<double> thetas;
    int kernel_size = 0;
    int lambda_px = 0;
};

int lambda_from_kernel(int K);

// Raw carrier-times-envelope waveform on the integer grid
// [-(K-1)/2, (K-1)/2]^2, without normalization. Also used to render
// Gabor-patch stimuli.
std::vector<double> gabor_waveform(int kernel_size, double theta, double frequency,
                                   double sigma1, double sigma2, double psi);

// Zero-mean, positive-part-L1-normalized oriented Gabor sampled on the
// integer grid [-(K-1)/2, (K-1)/2]^2.
std::vector<double> build_gabor_kernel(const GaborConfig& cfg, double theta);

GaborBank build_gabor_bank(const GaborConfig& cfg);

// Half-rectified "same"-size convolution of the image with every kernel,
// replicate padding at the borders.
FeatureStack gabor_layer(const GrayImage& image, const GaborBank& bank);

}  // namespace colvis
