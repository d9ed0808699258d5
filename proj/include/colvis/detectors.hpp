#pragma once

#include <vector>

#include "colvis/core.hpp"
#include "colvis/pipeline.hpp"

namespace colvis {

struct DetectorConfig {
    double activity_threshold = 0.5;   // on normalized pooled image intensity
    double suppression_threshold = 0.2;
    double fault_threshold = 0.5;
    int ior_radius = 7;                // pooled pixels
    int max_rois = 32;
    double saliency_stop = 0.4;
};

struct Roi {
    int rank = 0;                      // 1-based extraction order
    int center_row = 0;                // pooled grid
    int center_col = 0;
    int top = 0;                       // image-resolution bbox, clipped to bounds
    int left = 0;
    int height = 0;
    int width = 0;
    double score = 0.0;
};
using RoiList = std::vector<Roi>;

struct LongGaborComparison {
    ScalarMap col_map;                 // difference-enhanced map, pooled grid
    ScalarMap long_gabor_map;          // rectified long-Gabor max, image grid
    double snr_col = 0.0;
    double snr_long = 0.0;
    double snr_ratio = 0.0;            // NaN when either map carries no signal
};

// 0/1 mask: normalized intensity >= threshold.
ScalarMap activity_mask(const ScalarMap& pooled_image, double threshold);

// Per-pixel max over orientations of (col - pooled), floored at zero.
ScalarMap difference_map(const FeatureStack& col, const FeatureStack& pooled);

// High where the image has structure that gained no collinear support:
// min(1 - normalize(D), activity mask).
ScalarMap fault_response_map(const ScalarMap& diff, const ScalarMap& pooled_image,
                             const DetectorConfig& config);

ScalarMap fault_detector(const ScalarMap& response, const DetectorConfig& config);

// min(1 - normalized max collinearity response, activity mask).
ScalarMap saliency_map(const FeatureStack& col, const ScalarMap& pooled_image,
                       const DetectorConfig& config);

// Same construction fed by the pooled stack instead of the collinearity layer.
ScalarMap baseline_saliency(const FeatureStack& pooled, const ScalarMap& pooled_image,
                            const DetectorConfig& config);

// Greedy max + circular inhibition-of-return. Ties resolve to the smallest
// row, then column. bbox side is 2 * ior_radius * p, centered on the image
// projection of the pooled center and clipped to image bounds.
RoiList extract_rois_with_ior(const ScalarMap& saliency, const DetectorConfig& config,
                              int pool_stride, int image_height, int image_width);

// Blend toward the global mean where the (image-resolution, normalized)
// difference map exceeds suppression_threshold.
GrayImage suppression_blend(const GrayImage& image, const ScalarMap& diff_upsampled,
                            const DetectorConfig& config);

// Plane 0: input image. Plane 1: response upsampled to image resolution.
FeatureStack channel_concat_export(const GrayImage& image, const ScalarMap& response,
                                   int pool_stride);

// Pipeline difference map vs a single rectified long-kernel Gabor pass.
// SNR = mean on-line / mean off-line; masks are image-resolution and are
// sampled at the pooled phase centers for the pooled-grid map.
LongGaborComparison long_gabor_compare(const GrayImage& image, const ScalarMap& on_mask,
                                       const ScalarMap& off_mask, int long_kernel_size,
                                       const ModelParams& params);

}  // namespace colvis
