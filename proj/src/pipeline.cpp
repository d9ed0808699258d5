#include "colvis/pipeline.hpp"

namespace colvis {

CollinearityKernelSet pipeline_kernels(const ModelParams& params, const GaborBank& bank) {
    CollinearityKernelConfig kcfg = params.kernel;
    kcfg.lambda = static_cast<double>(bank.lambda_px) / params.pooling.p;
    return build_collinearity_kernels(kcfg, bank.thetas);
}

ModelOutput run_model(const GrayImage& image, const ModelParams& params) {
    GaborBank bank = build_gabor_bank(params.gabor);
    ModelOutput out;
    out.gabor = gabor_layer(image, bank);
    out.pooled = pool(out.gabor, params.pooling);
    CollinearityKernelSet kernels = pipeline_kernels(params, bank);
    CollinearityResult res = collinearity_layer(out.pooled, kernels, params.dynamics);
    out.col = std::move(res.rates);
    out.steps = res.steps;
    out.residual = res.residual;
    return out;
}

}  // namespace colvis
