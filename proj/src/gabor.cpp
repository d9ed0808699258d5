#include "colvis/gabor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace colvis {

std::vector<double> GaborConfig::resolved_orientations() const {
    if (!orientations.empty()) return orientations;
    std::vector<double> thetas;
    const int n = fold_symmetric ? 4 : 8;
    for (int i = 0; i < n; ++i)
        thetas.push_back(i * 0.25 * std::numbers::pi);
    return thetas;
}

double GaborConfig::resolved_frequency() const {
    return frequency > 0.0 ? frequency : 1.0 / lambda_from_kernel(kernel_size);
}

double GaborConfig::resolved_sigma1() const {
    return sigma1 > 0.0 ? sigma1 : 0.4 * kernel_size;
}

double GaborConfig::resolved_sigma2() const {
    return sigma2 > 0.0 ? sigma2 : 0.4 * kernel_size;
}

int lambda_from_kernel(int K) {
    if (K < 3) throw std::invalid_argument("lambda_from_kernel: K must be >= 3");
    return std::max(1, static_cast<int>(std::lround(K / 2.2)));
}

std::vector<double> gabor_waveform(int kernel_size, double theta, double frequency,
                                   double sigma1, double sigma2, double psi) {
    const int K = kernel_size;
    if (K < 3 || K % 2 == 0) throw std::invalid_argument("gabor_waveform: K must be odd and >= 3");
    const int half = (K - 1) / 2;
    const double ct = std::cos(theta), st = std::sin(theta);
    std::vector<double> k(static_cast<size_t>(K) * K);
    for (int x1 = -half; x1 <= half; ++x1) {
        for (int x2 = -half; x2 <= half; ++x2) {
            const double X1 = x1 * ct + x2 * st;
            const double X2 = -x1 * st + x2 * ct;
            const double env =
                std::exp(-(X1 * X1 / (2 * sigma1 * sigma1) + X2 * X2 / (2 * sigma2 * sigma2)));
            k[static_cast<size_t>(x1 + half) * K + (x2 + half)] =
                env * std::cos(2 * std::numbers::pi * frequency * X1 + psi);
        }
    }
    return k;
}

std::vector<double> build_gabor_kernel(const GaborConfig& cfg, double theta) {
    std::vector<double> k = gabor_waveform(cfg.kernel_size, theta, cfg.resolved_frequency(),
                                           cfg.resolved_sigma1(), cfg.resolved_sigma2(), cfg.psi);
    double mean = 0.0;
    for (double v : k) mean += v;
    mean /= k.size();
    double pos = 0.0;
    for (double& v : k) {
        v -= mean;
        if (v > 0) pos += v;
    }
    if (pos > 0) {
        for (double& v : k) v /= pos;
    }
    return k;
}

GaborBank build_gabor_bank(const GaborConfig& cfg) {
    GaborBank bank;
    bank.thetas = cfg.resolved_orientations();
    if (bank.thetas.empty()) throw std::invalid_argument("build_gabor_bank: empty orientation list");
    bank.kernel_size = cfg.kernel_size;
    bank.lambda_px = lambda_from_kernel(cfg.kernel_size);
    for (double t : bank.thetas)
        bank.kernels.push_back(build_gabor_kernel(cfg, t));
    return bank;
}

FeatureStack gabor_layer(const GrayImage& image, const GaborBank& bank) {
    const int H = image.height, W = image.width;
    const int K = bank.kernel_size, half = (K - 1) / 2;
    const int L = static_cast<int>(bank.kernels.size());
    FeatureStack out(H, W, L);
    for (int l = 0; l < L; ++l) {
        const double* kern = bank.kernels[l].data();
        double* op = out.plane(l);
#pragma omp parallel for schedule(static)
        for (int r = 0; r < H; ++r) {
            for (int c = 0; c < W; ++c) {
                double acc = 0.0;
                for (int dr = -half; dr <= half; ++dr) {
                    const int sr = std::clamp(r - dr, 0, H - 1);
                    const double* row = image.data.data() + static_cast<size_t>(sr) * W;
                    const double* krow = kern + static_cast<size_t>(dr + half) * K;
                    for (int dc = -half; dc <= half; ++dc) {
                        const int sc = std::clamp(c - dc, 0, W - 1);
                        acc += krow[dc + half] * row[sc];
                    }
                }
                op[static_cast<size_t>(r) * W + c] = acc > 0.0 ? acc : 0.0;
            }
        }
    }
    return out;
}

}  // namespace colvis
