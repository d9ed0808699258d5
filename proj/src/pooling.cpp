#include "colvis/pooling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace colvis {

std::vector<double> lanczos3_kernel(int p) {
    if (p < 1) throw std::invalid_argument("lanczos3_kernel: p must be >= 1");
    constexpr double a = 3.0;
    const int reach = 3 * p - 1;
    std::vector<double> taps(2 * reach + 1);
    double sum = 0.0;
    for (int x = -reach; x <= reach; ++x) {
        const double xp = static_cast<double>(x) / p;
        double v;
        if (x == 0) {
            v = 1.0;
        } else {
            const double px = std::numbers::pi * xp;
            v = a * std::sin(px) * std::sin(px / a) / (px * px);
        }
        taps[x + reach] = v;
        sum += v;
    }
    for (double& v : taps) v /= sum;
    return taps;
}

namespace {

// One separable pass along the contiguous axis, then transpose, so both
// passes run on unit-stride data.
void pass_and_transpose(const double* in, int h, int w, int out_w,
                        const std::vector<double>& taps, int p, double* out) {
    const int reach = 3 * p - 1;
    const int center_off = (p - 1) / 2;
#pragma omp parallel for schedule(static)
    for (int r = 0; r < h; ++r) {
        const double* row = in + static_cast<size_t>(r) * w;
        for (int j = 0; j < out_w; ++j) {
            const int center = j * p + center_off;
            double acc = 0.0;
            for (int x = -reach; x <= reach; ++x) {
                const int src = std::clamp(center + x, 0, w - 1);
                acc += taps[x + reach] * row[src];
            }
            out[static_cast<size_t>(j) * h + r] = acc;
        }
    }
}

}  // namespace

FeatureStack pool(const FeatureStack& stack, const PoolingConfig& cfg) {
    const int p = cfg.p;
    if (p < 1) throw std::invalid_argument("pool: p must be >= 1");
    if (stack.height < p || stack.width < p)
        throw std::invalid_argument("pool: stack smaller than pool size");
    const int Ho = stack.height / p, Wo = stack.width / p;
    const auto taps = lanczos3_kernel(p);
    FeatureStack out(Ho, Wo, stack.orientations);
    std::vector<double> tmp(static_cast<size_t>(Wo) * stack.height);
    std::vector<double> tmp2(static_cast<size_t>(Ho) * Wo);
    for (int l = 0; l < stack.orientations; ++l) {
        pass_and_transpose(stack.plane(l), stack.height, stack.width, Wo, taps, p, tmp.data());
        pass_and_transpose(tmp.data(), Wo, stack.height, Ho, taps, p, tmp2.data());
        double* op = out.plane(l);
        for (size_t i = 0; i < tmp2.size(); ++i)
            op[i] = tmp2[i] > 0.0 ? tmp2[i] : 0.0;
    }
    return out;
}

ScalarMap pool_image(const GrayImage& image, const PoolingConfig& cfg) {
    FeatureStack s(image.height, image.width, 1);
    std::copy(image.data.begin(), image.data.end(), s.data.begin());
    FeatureStack pooled = pool(s, cfg);
    ScalarMap out(pooled.height, pooled.width);
    std::copy(pooled.data.begin(), pooled.data.end(), out.data.begin());
    return out;
}

ScalarMap upsample_bilinear(const ScalarMap& map, int out_height, int out_width, int p) {
    if (p < 1) throw std::invalid_argument("upsample_bilinear: p must be >= 1");
    if (out_height < 1 || out_width < 1)
        throw std::invalid_argument("upsample_bilinear: bad output size");
    const double offset = (p - 1) / 2;
    ScalarMap out(out_height, out_width);
    auto clamp_i = [](int v, int n) { return v < 0 ? 0 : (v >= n ? n - 1 : v); };
    for (int r = 0; r < out_height; ++r) {
        const double u = (r - offset) / p;
        const int i0 = static_cast<int>(std::floor(u));
        const double fr = u - i0;
        const int ra = clamp_i(i0, map.height);
        const int rb = clamp_i(i0 + 1, map.height);
        for (int c = 0; c < out_width; ++c) {
            const double v = (c - offset) / p;
            const int j0 = static_cast<int>(std::floor(v));
            const double fc = v - j0;
            const int ca = clamp_i(j0, map.width);
            const int cb = clamp_i(j0 + 1, map.width);
            out.at(r, c) = (1.0 - fr) * ((1.0 - fc) * map.at(ra, ca) + fc * map.at(ra, cb)) +
                           fr * ((1.0 - fc) * map.at(rb, ca) + fc * map.at(rb, cb));
        }
    }
    return out;
}

}  // namespace colvis
