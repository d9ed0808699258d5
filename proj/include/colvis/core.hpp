#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace colvis {

// 2D scalar field, row-major. Intensities live in [0,1] for images; maps
// document their own range.
struct GrayImage {
    int height = 0;
    int width = 0;
    std::vector<double> data;

    GrayImage() = default;
    GrayImage(int h, int w, double fill = 0.0)
        : height(h), width(w), data(checked_size(h, w), fill) {}

    static size_t checked_size(int h, int w) {
        if (h < 1 || w < 1) throw std::invalid_argument("GrayImage: dims must be >= 1");
        return static_cast<size_t>(h) * w;
    }
    double& at(int r, int c) { return data[static_cast<size_t>(r) * width + c]; }
    double at(int r, int c) const { return data[static_cast<size_t>(r) * width + c]; }
};

using ScalarMap = GrayImage;

// H x W x L stack of nonnegative firing rates, one plane per orientation.
// Plane-major layout so per-orientation convolutions stay contiguous.
struct FeatureStack {
    int height = 0;
    int width = 0;
    int orientations = 0;
    std::vector<double> data;

    FeatureStack() = default;
    FeatureStack(int h, int w, int l, double fill = 0.0)
        : height(h), width(w), orientations(l), data(checked_size(h, w, l), fill) {}

    static size_t checked_size(int h, int w, int l) {
        if (h < 1 || w < 1 || l < 1) throw std::invalid_argument("FeatureStack: dims must be >= 1");
        return static_cast<size_t>(h) * w * l;
    }
    size_t plane_size() const { return static_cast<size_t>(height) * width; }
    double* plane(int l) { return data.data() + plane_size() * l; }
    const double* plane(int l) const { return data.data() + plane_size() * l; }
    double& at(int r, int c, int l) { return data[plane_size() * l + static_cast<size_t>(r) * width + c]; }
    double at(int r, int c, int l) const { return data[plane_size() * l + static_cast<size_t>(r) * width + c]; }
};

ScalarMap max_over_orientations(const FeatureStack& stack);

// Affine rescale to [0,1]; a constant map becomes all zeros so threshold
// stages read it as "no signal".
ScalarMap normalize_unit(const ScalarMap& map);

std::vector<double> slice_profile(const FeatureStack& stack, int row, int orientation);

double central_readout(const FeatureStack& stack, int orientation);

}  // namespace colvis
