#include "colvis/collinearity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace colvis {

CollinearityKernelSet build_collinearity_kernels(const CollinearityKernelConfig& cfg,
                                                 const std::vector<double>& orientations) {
    if (!(cfg.inner_start > 0.0) || cfg.inner_start > cfg.plateau_end ||
        cfg.plateau_end > cfg.outer_end || !(cfg.half_width > 0.0) || !(cfg.lambda > 0.0))
        throw std::invalid_argument("build_collinearity_kernels: invalid band geometry");
    const double lam = cfg.lambda;
    const int R = static_cast<int>(std::ceil(cfg.outer_end * lam));
    const int side = 2 * R + 1;
    CollinearityKernelSet set;
    set.side = side;
    set.lambda = lam;
    set.thetas = orientations;
    const double inner = cfg.inner_start * lam;
    const double plateau = cfg.plateau_end * lam;
    const double outer = cfg.outer_end * lam;
    const double hw = cfg.half_width * lam;
    for (double theta : orientations) {
        const double ct = std::cos(theta), st = std::sin(theta);
        std::vector<double> k(static_cast<size_t>(side) * side, 0.0);
        double sum = 0.0;
        for (int dr = -R; dr <= R; ++dr) {
            for (int dc = -R; dc <= R; ++dc) {
                // Distance along the orientation's line axis (the Gabor
                // ridge runs perpendicular to its carrier axis), and
                // offset across it.
                const double along = -dr * st + dc * ct;
                const double across = dr * ct + dc * st;
                if (std::abs(across) > hw) continue;
                const double u = std::abs(along);
                double g = 0.0;
                if (u >= inner && u <= plateau)
                    g = 1.0;
                else if (u > plateau && u <= outer)
                    g = (outer - u) / (outer - plateau);
                if (g > 0.0) {
                    k[static_cast<size_t>(dr + R) * side + (dc + R)] = g;
                    sum += g;
                }
            }
        }
        if (sum > 0.0)
            for (double& v : k) v /= sum;
        std::vector<CollinearityKernelSet::Tap> taps;
        for (int dr = -R; dr <= R; ++dr)
            for (int dc = -R; dc <= R; ++dc) {
                const double w = k[static_cast<size_t>(dr + R) * side + (dc + R)];
                if (w != 0.0) taps.push_back({dr, dc, w});
            }
        set.kernels.push_back(std::move(k));
        set.taps.push_back(std::move(taps));
    }
    return set;
}

FeatureStack collinearity_influence(const FeatureStack& r, const CollinearityKernelSet& kernels) {
    if (static_cast<size_t>(r.orientations) != kernels.kernels.size())
        throw std::invalid_argument("collinearity_influence: orientation count mismatch");
    const int H = r.height, W = r.width;
    FeatureStack out(H, W, r.orientations);
    for (int l = 0; l < r.orientations; ++l) {
        const auto& taps = kernels.taps[l];
        const double* in = r.plane(l);
        double* op = out.plane(l);
#pragma omp parallel for schedule(static)
        for (int i = 0; i < H; ++i) {
            double* orow = op + static_cast<size_t>(i) * W;
            for (const auto& t : taps) {
                // Convolution: the kernel is flipped, so tap (dr,dc) reads
                // the source at (i-dr, j-dc).
                const int sr = i - t.dr;
                if (sr < 0 || sr >= H) continue;
                const double* irow = in + static_cast<size_t>(sr) * W;
                const int j0 = std::max(0, t.dc);
                const int j1 = std::min(W, W + t.dc);
                const double w = t.w;
                for (int j = j0; j < j1; ++j)
                    orow[j] += w * irow[j - t.dc];
            }
        }
    }
    return out;
}

CollinearityResult collinearity_layer(const FeatureStack& r_pool,
                                      const CollinearityKernelSet& kernels,
                                      const DynamicsConfig& dyn) {
    if (!(dyn.dt_ms > 0.0) || dyn.dt_ms > dyn.tau_ms || !(dyn.epsilon > 0.0) || dyn.max_steps < 1)
        throw std::invalid_argument("collinearity_layer: invalid dynamics config");
    const double rate = dyn.dt_ms / dyn.tau_ms;
    const size_t n = r_pool.data.size();
    CollinearityResult res;
    res.rates = r_pool;
    FeatureStack& r = res.rates;
    for (int step = 0; step <= dyn.max_steps; ++step) {
        FeatureStack a = collinearity_influence(r, kernels);
        // target = r_pool (1 + w_col a); residual = target - r
        double resid = 0.0;
        for (size_t i = 0; i < n; ++i) {
            const double t = r_pool.data[i] * (1.0 + dyn.w_col * a.data[i]);
            a.data[i] = t - r.data[i];
            const double m = std::abs(a.data[i]);
            if (m > resid) resid = m;
        }
        res.residual = resid;
        res.steps = step;
        if (resid < dyn.epsilon) return res;
        if (step == dyn.max_steps) break;
        for (size_t i = 0; i < n; ++i) {
            const double v = r.data[i] + rate * a.data[i];
            r.data[i] = v > 0.0 ? v : 0.0;
        }
    }
    throw std::runtime_error("collinearity_layer: no convergence after " +
                             std::to_string(dyn.max_steps) +
                             " steps, residual " + std::to_string(res.residual));
}

}  // namespace colvis
