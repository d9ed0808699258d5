#include "colvis/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "colvis/pooling.hpp"

namespace colvis {

void draw_segment(GrayImage& img, double r0, double c0, double r1, double c1, double value,
                  double thickness) {
    const double dr = r1 - r0;
    const double dc = c1 - c0;
    const double len2 = dr * dr + dc * dc;
    const double half = thickness / 2.0;
    const int rlo = std::max(0, static_cast<int>(std::floor(std::min(r0, r1) - half)));
    const int rhi = std::min(img.height - 1, static_cast<int>(std::ceil(std::max(r0, r1) + half)));
    const int clo = std::max(0, static_cast<int>(std::floor(std::min(c0, c1) - half)));
    const int chi = std::min(img.width - 1, static_cast<int>(std::ceil(std::max(c0, c1) + half)));
    for (int r = rlo; r <= rhi; ++r) {
        for (int c = clo; c <= chi; ++c) {
            double t = len2 > 0.0 ? ((r - r0) * dr + (c - c0) * dc) / len2 : 0.0;
            t = std::clamp(t, 0.0, 1.0);
            const double py = r0 + t * dr;
            const double px = c0 + t * dc;
            if (std::hypot(r - py, c - px) <= half) img.at(r, c) = value;
        }
    }
}

WaferScene wafer_scene() {
    constexpr int H = 320, W = 320;
    constexpr double radius = 60.0, thickness = 3.0;
    constexpr double arc_cy = 160.0, arc_cx = 50.0;
    WaferScene scene;
    scene.image = GrayImage(H, W, 0.0);
    scene.street_rows = {64, 160, 256};
    for (int sr : scene.street_rows)
        for (int r = sr - 1; r <= sr + 1; ++r)
            for (int c = 0; c < W; ++c) scene.image.at(r, c) = 1.0;

    scene.arc_mask.assign(static_cast<size_t>(H) * W, 0);
    for (int r = 0; r < H; ++r) {
        for (int c = 0; c < W; ++c) {
            const double dist = std::abs(std::hypot(r - arc_cy, c - arc_cx) - radius);
            const double ang = std::atan2(r - arc_cy, c - arc_cx) * 180.0 / std::numbers::pi;
            if (dist <= thickness / 2.0 && std::abs(ang) < 62.0) {
                scene.image.at(r, c) = 1.0;
                scene.arc_mask[static_cast<size_t>(r) * W + c] = 1;
            }
        }
    }
    return scene;
}

WaferLabels wafer_labels(const WaferScene& scene, int pool_stride) {
    const int p = pool_stride;
    PoolingConfig pcfg{p};
    GrayImage arcf(scene.image.height, scene.image.width, 0.0);
    for (size_t i = 0; i < scene.arc_mask.size(); ++i)
        arcf.data[i] = scene.arc_mask[i] ? 1.0 : 0.0;
    ScalarMap arc_cov = pool_image(arcf, pcfg);

    WaferLabels labels;
    labels.height = arc_cov.height;
    labels.width = arc_cov.width;
    const int hp = labels.height, wp = labels.width;
    labels.fault.assign(static_cast<size_t>(hp) * wp, 0);
    labels.street.assign(static_cast<size_t>(hp) * wp, 0);

    auto in_margin = [&](int r, int c) {
        constexpr int m = 24;
        return r >= m && r < hp - m && c >= m && c < wp - m;
    };
    std::vector<int> street_pooled;
    for (int sr : scene.street_rows) street_pooled.push_back((sr - 1) / p);

    // a pooled pixel is arc if most of its footprint is
    auto arc_at = [&](int r, int c) { return arc_cov.at(r, c) > 0.5; };

    int cross_lo = wp, cross_hi = -1;  // columns where the arc meets a street band
    for (int row : street_pooled) {
        for (int c = 0; c < wp; ++c) {
            for (int r = std::max(0, row - 2); r <= std::min(hp - 1, row + 2); ++r) {
                if (arc_at(r, c)) {
                    cross_lo = std::min(cross_lo, c);
                    cross_hi = std::max(cross_hi, c);
                    break;
                }
            }
        }
    }

    for (int r = 0; r < hp; ++r) {
        const bool near_street = std::any_of(street_pooled.begin(), street_pooled.end(),
                                             [&](int row) { return std::abs(r - row) <= 2; });
        const bool on_street = std::find(street_pooled.begin(), street_pooled.end(), r) !=
                               street_pooled.end();
        for (int c = 0; c < wp; ++c) {
            if (!in_margin(r, c)) continue;
            if (arc_at(r, c) && !near_street)
                labels.fault[static_cast<size_t>(r) * wp + c] = 1;
            if (on_street && (cross_hi < 0 || c < cross_lo - 6 || c > cross_hi + 6))
                labels.street[static_cast<size_t>(r) * wp + c] = 1;
        }
    }
    return labels;
}

FiberScene fiber_scene() {
    constexpr int H = 384, W = 384;
    FiberScene scene;
    scene.image = GrayImage(H, W, 0.02);
    constexpr double fiber_val = 0.69;
    for (int r : {60, 180, 330}) draw_segment(scene.image, r, 0, r, 383, fiber_val);
    for (int c : {60, 200, 330}) draw_segment(scene.image, 0, c, 383, c, fiber_val);
    // short bright fragments: intensity anchors too short to gain collinear
    // support
    draw_segment(scene.image, 120, 250, 120, 266, 1.0);
    draw_segment(scene.image, 250, 130, 266, 130, 1.0);

    SpeckleRng rng(7);
    scene.clump_centers = {{100, 150}, {268, 268}, {290, 100}};
    for (const auto& [cy, cx] : scene.clump_centers) {
        for (int r = cy - 14; r <= cy + 14; ++r) {
            for (int c = cx - 14; c <= cx + 14; ++c) {
                if (r < 0 || r >= H || c < 0 || c >= W) continue;
                if (std::hypot(r - cy, c - cx) <= 14.0)
                    scene.image.at(r, c) = rng.uniform(0.25, 0.62);
            }
        }
    }
    return scene;
}

CrossingScene crossing_scene() {
    constexpr int H = 96, W = 96;
    CrossingScene scene;
    scene.image = GrayImage(H, W, 0.0);
    SpeckleRng rng(11);
    for (double& v : scene.image.data) v = 0.05 + rng.uniform(0.0, 0.25);
    draw_segment(scene.image, 47, 4, 47, 91, 0.9);
    draw_segment(scene.image, 4, 47, 91, 47, 0.9);
    for (double& v : scene.image.data) v = std::clamp(v, 0.0, 1.0);

    scene.on_mask = ScalarMap(H, W, 0.0);
    scene.off_mask = ScalarMap(H, W, 0.0);
    for (int r = 0; r < H; ++r) {
        for (int c = 0; c < W; ++c) {
            const int dist = std::min(std::abs(r - 47), std::abs(c - 47));
            if (dist <= 1) scene.on_mask.at(r, c) = 1.0;
            if (dist >= 6) scene.off_mask.at(r, c) = 1.0;
        }
    }
    return scene;
}

}  // namespace colvis
