#pragma once

#include <vector>

#include "colvis/core.hpp"

namespace colvis {

struct PoolingConfig {
    int p = 3;  // stride / pool size
    // Lanczos lobe parameter is fixed at 3.
};

// Normalized taps of the Lanczos3 window sampled at integer offsets
// x in [-3p+1, 3p-1] from the output-pixel center.
std::vector<double> lanczos3_kernel(int p);

// Separable Lanczos3 resampling with stride p, replicate padding, output
// floor(H/p) x floor(W/p); output pixel j centers on input j*p + (p-1)/2.
// Negative ringing is clamped to zero.
FeatureStack pool(const FeatureStack& stack, const PoolingConfig& cfg);

ScalarMap pool_image(const GrayImage& image, const PoolingConfig& cfg);

// Inverse registration: output pixel R samples the map at (R - (p-1)/2) / p
// with clamped bilinear interpolation, so a delta at pooled (r, c) peaks at
// image pixel (r*p + (p-1)/2, c*p + (p-1)/2).
ScalarMap upsample_bilinear(const ScalarMap& map, int out_height, int out_width, int p);

}  // namespace colvis
