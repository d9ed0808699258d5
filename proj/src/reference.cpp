#include "colvis/reference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace colvis::ref {

namespace {

int clamp_index(int v, int n) { return v < 0 ? 0 : (v >= n ? n - 1 : v); }

}  // namespace

FeatureStack gabor_layer(const GrayImage& image, const GaborBank& bank) {
    const int h = image.height;
    const int w = image.width;
    const int side = bank.kernel_size;
    const int reach = side / 2;
    FeatureStack out(h, w, static_cast<int>(bank.kernels.size()));
    for (int l = 0; l < out.orientations; ++l) {
        const std::vector<double>& k = bank.kernels[static_cast<size_t>(l)];
        double* plane = out.plane(l);
        for (int r = 0; r < h; ++r) {
            for (int c = 0; c < w; ++c) {
                double acc = 0.0;
                for (int dr = -reach; dr <= reach; ++dr) {
                    const int sr = clamp_index(r - dr, h);
                    for (int dc = -reach; dc <= reach; ++dc) {
                        const int sc = clamp_index(c - dc, w);
                        acc += k[static_cast<size_t>((dr + reach) * side + (dc + reach))] *
                               image.data[static_cast<size_t>(sr) * w + sc];
                    }
                }
                plane[static_cast<size_t>(r) * w + c] = acc > 0.0 ? acc : 0.0;
            }
        }
    }
    return out;
}

FeatureStack pool(const FeatureStack& stack, const PoolingConfig& config) {
    const int p = config.p;
    if (p < 1) throw std::invalid_argument("pooling stride must be >= 1");
    const int oh = stack.height / p;
    const int ow = stack.width / p;
    if (oh < 1 || ow < 1) throw std::invalid_argument("input smaller than pooling stride");
    const std::vector<double> k = lanczos3_kernel(p);
    const int reach = static_cast<int>(k.size()) / 2;
    FeatureStack out(oh, ow, stack.orientations);
    // Direct 2D outer-product evaluation; clamping is per axis so this matches
    // the separable two-pass form exactly.
    for (int l = 0; l < stack.orientations; ++l) {
        const double* in = stack.plane(l);
        double* op = out.plane(l);
        for (int i = 0; i < oh; ++i) {
            const int cr = i * p + (p - 1) / 2;
            for (int j = 0; j < ow; ++j) {
                const int cc = j * p + (p - 1) / 2;
                double acc = 0.0;
                for (int dr = -reach; dr <= reach; ++dr) {
                    const int sr = clamp_index(cr + dr, stack.height);
                    double row = 0.0;
                    for (int dc = -reach; dc <= reach; ++dc) {
                        const int sc = clamp_index(cc + dc, stack.width);
                        row += k[static_cast<size_t>(dc + reach)] *
                               in[static_cast<size_t>(sr) * stack.width + sc];
                    }
                    acc += k[static_cast<size_t>(dr + reach)] * row;
                }
                op[static_cast<size_t>(i) * ow + j] = acc;
            }
        }
    }
    for (double& v : out.data)
        if (v < 0.0) v = 0.0;
    return out;
}

FeatureStack collinearity_influence(const FeatureStack& rates,
                                    const CollinearityKernelSet& kernels) {
    if (rates.orientations != static_cast<int>(kernels.kernels.size()))
        throw std::invalid_argument("orientation count mismatch");
    const int h = rates.height;
    const int w = rates.width;
    const int side = kernels.side;
    const int reach = side / 2;
    FeatureStack out(h, w, rates.orientations);
    for (int l = 0; l < rates.orientations; ++l) {
        const std::vector<double>& k = kernels.kernels[static_cast<size_t>(l)];
        const double* in = rates.plane(l);
        double* op = out.plane(l);
        for (int r = 0; r < h; ++r) {
            for (int c = 0; c < w; ++c) {
                double acc = 0.0;
                for (int dr = -reach; dr <= reach; ++dr) {
                    const int sr = r - dr;
                    if (sr < 0 || sr >= h) continue;
                    for (int dc = -reach; dc <= reach; ++dc) {
                        const int sc = c - dc;
                        if (sc < 0 || sc >= w) continue;
                        acc += k[static_cast<size_t>((dr + reach) * side + (dc + reach))] *
                               in[static_cast<size_t>(sr) * w + sc];
                    }
                }
                op[static_cast<size_t>(r) * w + c] = acc;
            }
        }
    }
    return out;
}

CollinearityResult collinearity_picard(const FeatureStack& pooled,
                                       const CollinearityKernelSet& kernels,
                                       const DynamicsConfig& config,
                                       double tol) {
    CollinearityResult result;
    result.rates = pooled;
    const size_t n = pooled.data.size();
    for (int it = 0; it <= config.max_steps; ++it) {
        FeatureStack infl = ref::collinearity_influence(result.rates, kernels);
        double resid = 0.0;
        for (size_t i = 0; i < n; ++i) {
            const double target = pooled.data[i] * (1.0 + config.w_col * infl.data[i]);
            resid = std::max(resid, std::abs(target - result.rates.data[i]));
            infl.data[i] = target;
        }
        result.steps = it;
        result.residual = resid;
        if (resid < tol) return result;
        result.rates.data.swap(infl.data);
    }
    throw std::runtime_error("fixed-point iteration did not converge, residual " +
                             std::to_string(result.residual));
}

}  // namespace colvis::ref
