#pragma once

#include "colvis/collinearity.hpp"
#include "colvis/core.hpp"
#include "colvis/gabor.hpp"
#include "colvis/pooling.hpp"

namespace colvis {

struct ModelParams {
    GaborConfig gabor;
    PoolingConfig pooling;
    CollinearityKernelConfig kernel;  // lambda field ignored; derived from the bank
    DynamicsConfig dynamics;
};

struct ModelOutput {
    FeatureStack gabor;
    FeatureStack pooled;
    FeatureStack col;
    int steps = 0;
    double residual = 0.0;
};

// The connectivity band is calibrated in image pixels (5..14 lambda), so on
// the pooled grid the kernels use lambda / p.
CollinearityKernelSet pipeline_kernels(const ModelParams& params, const GaborBank& bank);

ModelOutput run_model(const GrayImage& image, const ModelParams& params);

}  // namespace colvis
