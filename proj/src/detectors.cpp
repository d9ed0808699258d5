#include "colvis/detectors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "colvis/pooling.hpp"

namespace colvis {

ScalarMap activity_mask(const ScalarMap& pooled_image, double threshold) {
    ScalarMap mask = normalize_unit(pooled_image);
    for (double& v : mask.data) v = v >= threshold ? 1.0 : 0.0;
    return mask;
}

ScalarMap difference_map(const FeatureStack& col, const FeatureStack& pooled) {
    if (col.height != pooled.height || col.width != pooled.width ||
        col.orientations != pooled.orientations)
        throw std::invalid_argument("difference_map: shape mismatch");
    ScalarMap diff(col.height, col.width);
    const size_t n = static_cast<size_t>(col.height) * col.width;
    for (int l = 0; l < col.orientations; ++l) {
        const double* cp = col.plane(l);
        const double* pp = pooled.plane(l);
        for (size_t i = 0; i < n; ++i) diff.data[i] = std::max(diff.data[i], cp[i] - pp[i]);
    }
    for (double& v : diff.data)
        if (v < 0.0) v = 0.0;
    return diff;
}

ScalarMap fault_response_map(const ScalarMap& diff, const ScalarMap& pooled_image,
                             const DetectorConfig& config) {
    if (diff.height != pooled_image.height || diff.width != pooled_image.width)
        throw std::invalid_argument("fault_response_map: shape mismatch");
    ScalarMap inv = normalize_unit(diff);
    ScalarMap mask = activity_mask(pooled_image, config.activity_threshold);
    for (size_t i = 0; i < inv.data.size(); ++i)
        inv.data[i] = std::min(1.0 - inv.data[i], mask.data[i]);
    return inv;
}

ScalarMap fault_detector(const ScalarMap& response, const DetectorConfig& config) {
    ScalarMap out = response;
    for (double& v : out.data) v = v >= config.fault_threshold ? 1.0 : 0.0;
    return out;
}

namespace {

ScalarMap inverted_saliency(const FeatureStack& stack, const ScalarMap& pooled_image,
                            const DetectorConfig& config) {
    if (stack.height != pooled_image.height || stack.width != pooled_image.width)
        throw std::invalid_argument("saliency: shape mismatch");
    ScalarMap s1 = normalize_unit(max_over_orientations(stack));
    ScalarMap mask = activity_mask(pooled_image, config.activity_threshold);
    for (size_t i = 0; i < s1.data.size(); ++i)
        s1.data[i] = std::min(1.0 - s1.data[i], mask.data[i]);
    return s1;
}

}  // namespace

ScalarMap saliency_map(const FeatureStack& col, const ScalarMap& pooled_image,
                       const DetectorConfig& config) {
    return inverted_saliency(col, pooled_image, config);
}

ScalarMap baseline_saliency(const FeatureStack& pooled, const ScalarMap& pooled_image,
                            const DetectorConfig& config) {
    return inverted_saliency(pooled, pooled_image, config);
}

RoiList extract_rois_with_ior(const ScalarMap& saliency, const DetectorConfig& config,
                              int pool_stride, int image_height, int image_width) {
    if (config.ior_radius < 1 || config.max_rois < 1)
        throw std::invalid_argument("extract_rois_with_ior: bad config");
    ScalarMap work = saliency;
    const int h = work.height;
    const int w = work.width;
    RoiList rois;
    rois.reserve(static_cast<size_t>(config.max_rois));
    while (static_cast<int>(rois.size()) < config.max_rois) {
        int br = 0, bc = 0;
        double best = -std::numeric_limits<double>::infinity();
        for (int r = 0; r < h; ++r) {
            const double* row = work.data.data() + static_cast<size_t>(r) * w;
            for (int c = 0; c < w; ++c) {
                if (row[c] > best) {
                    best = row[c];
                    br = r;
                    bc = c;
                }
            }
        }
        if (best < config.saliency_stop) break;

        Roi roi;
        roi.rank = static_cast<int>(rois.size()) + 1;
        roi.center_row = br;
        roi.center_col = bc;
        roi.score = best;
        const int proj_r = br * pool_stride + (pool_stride - 1) / 2;
        const int proj_c = bc * pool_stride + (pool_stride - 1) / 2;
        const int side = 2 * config.ior_radius * pool_stride;
        int top = proj_r - side / 2;
        int left = proj_c - side / 2;
        int bottom = std::min(top + side, image_height);
        int right = std::min(left + side, image_width);
        top = std::max(top, 0);
        left = std::max(left, 0);
        roi.top = top;
        roi.left = left;
        roi.height = bottom - top;
        roi.width = right - left;
        rois.push_back(roi);

        const int rad = config.ior_radius;
        for (int r = std::max(0, br - rad); r <= std::min(h - 1, br + rad); ++r) {
            double* row = work.data.data() + static_cast<size_t>(r) * w;
            for (int c = std::max(0, bc - rad); c <= std::min(w - 1, bc + rad); ++c) {
                if ((r - br) * (r - br) + (c - bc) * (c - bc) <= rad * rad) row[c] = 0.0;
            }
        }
    }
    return rois;
}

GrayImage suppression_blend(const GrayImage& image, const ScalarMap& diff_upsampled,
                            const DetectorConfig& config) {
    if (image.height != diff_upsampled.height || image.width != diff_upsampled.width)
        throw std::invalid_argument("suppression_blend: shape mismatch");
    double mean = 0.0;
    for (double v : image.data) mean += v;
    mean /= static_cast<double>(image.data.size());
    GrayImage out(image.height, image.width);
    for (size_t i = 0; i < out.data.size(); ++i) {
        const double d = diff_upsampled.data[i] >= config.suppression_threshold
                             ? diff_upsampled.data[i]
                             : 0.0;
        out.data[i] = mean * d + image.data[i] * (1.0 - d);
    }
    return out;
}

FeatureStack channel_concat_export(const GrayImage& image, const ScalarMap& response,
                                   int pool_stride) {
    FeatureStack out(image.height, image.width, 2);
    std::copy(image.data.begin(), image.data.end(), out.plane(0));
    ScalarMap up = upsample_bilinear(response, image.height, image.width, pool_stride);
    std::copy(up.data.begin(), up.data.end(), out.plane(1));
    return out;
}

namespace {

double masked_mean(const ScalarMap& map, const ScalarMap& mask, bool pooled_centers, int p) {
    double sum = 0.0;
    long count = 0;
    for (int r = 0; r < map.height; ++r) {
        for (int c = 0; c < map.width; ++c) {
            const int mr = pooled_centers ? r * p + (p - 1) / 2 : r;
            const int mc = pooled_centers ? c * p + (p - 1) / 2 : c;
            if (mr >= mask.height || mc >= mask.width) continue;
            if (mask.at(mr, mc) == 0.0) continue;
            sum += map.at(r, c);
            ++count;
        }
    }
    if (count == 0) return std::numeric_limits<double>::quiet_NaN();
    return sum / static_cast<double>(count);
}

}  // namespace

LongGaborComparison long_gabor_compare(const GrayImage& image, const ScalarMap& on_mask,
                                       const ScalarMap& off_mask, int long_kernel_size,
                                       const ModelParams& params) {
    if (long_kernel_size % 2 == 0)
        throw std::invalid_argument("long_gabor_compare: kernel size must be odd");
    if (on_mask.height != image.height || on_mask.width != image.width ||
        off_mask.height != image.height || off_mask.width != image.width)
        throw std::invalid_argument("long_gabor_compare: mask shape mismatch");

    LongGaborComparison cmp;
    ModelOutput out = run_model(image, params);
    cmp.col_map = difference_map(out.col, out.pooled);

    GaborConfig long_cfg = params.gabor;
    long_cfg.kernel_size = long_kernel_size;
    long_cfg.frequency = 0.0;  // rederive from the long kernel size
    long_cfg.sigma1 = 0.0;
    long_cfg.sigma2 = 0.0;
    GaborBank long_bank = build_gabor_bank(long_cfg);
    cmp.long_gabor_map = max_over_orientations(gabor_layer(image, long_bank));

    const int p = params.pooling.p;
    const double col_on = masked_mean(cmp.col_map, on_mask, true, p);
    const double col_off = masked_mean(cmp.col_map, off_mask, true, p);
    const double long_on = masked_mean(cmp.long_gabor_map, on_mask, false, p);
    const double long_off = masked_mean(cmp.long_gabor_map, off_mask, false, p);
    cmp.snr_col = col_on / col_off;
    cmp.snr_long = long_on / long_off;
    cmp.snr_ratio = cmp.snr_col / cmp.snr_long;
    return cmp;
}

}  // namespace colvis
