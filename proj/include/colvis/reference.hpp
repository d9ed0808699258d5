#pragma once

#include "colvis/collinearity.hpp"
#include "colvis/core.hpp"
#include "colvis/gabor.hpp"
#include "colvis/pooling.hpp"

// Serial, dense implementations kept as oracles for the optimized kernels.
// Same contracts, structurally independent code paths.
namespace colvis::ref {

FeatureStack gabor_layer(const GrayImage& image, const GaborBank& bank);

FeatureStack pool(const FeatureStack& stack, const PoolingConfig& config);

FeatureStack collinearity_influence(const FeatureStack& rates,
                                    const CollinearityKernelSet& kernels);

// Fixed-point iteration r <- pooled * (1 + w * influence(r)), run to tol.
CollinearityResult collinearity_picard(const FeatureStack& pooled,
                                       const CollinearityKernelSet& kernels,
                                       const DynamicsConfig& config,
                                       double tol = 1e-10);

}  // namespace colvis::ref
