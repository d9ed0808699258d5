#include "colvis/core.hpp"

#include <algorithm>

namespace colvis {

ScalarMap max_over_orientations(const FeatureStack& stack) {
    ScalarMap out(stack.height, stack.width);
    const size_t n = stack.plane_size();
    const double* p0 = stack.plane(0);
    std::copy(p0, p0 + n, out.data.begin());
    for (int l = 1; l < stack.orientations; ++l) {
        const double* p = stack.plane(l);
        for (size_t i = 0; i < n; ++i)
            out.data[i] = std::max(out.data[i], p[i]);
    }
    return out;
}

ScalarMap normalize_unit(const ScalarMap& map) {
    const auto [lo_it, hi_it] = std::minmax_element(map.data.begin(), map.data.end());
    const double lo = *lo_it, hi = *hi_it;
    ScalarMap out(map.height, map.width);
    if (hi <= lo) return out;
    const double inv = 1.0 / (hi - lo);
    for (size_t i = 0; i < map.data.size(); ++i)
        out.data[i] = (map.data[i] - lo) * inv;
    return out;
}

std::vector<double> slice_profile(const FeatureStack& stack, int row, int orientation) {
    if (row < 0 || row >= stack.height)
        throw std::out_of_range("slice_profile: row out of range");
    if (orientation < 0 || orientation >= stack.orientations)
        throw std::out_of_range("slice_profile: orientation out of range");
    const double* p = stack.plane(orientation) + static_cast<size_t>(row) * stack.width;
    return std::vector<double>(p, p + stack.width);
}

double central_readout(const FeatureStack& stack, int orientation) {
    if (orientation < 0 || orientation >= stack.orientations)
        throw std::out_of_range("central_readout: orientation out of range");
    return stack.at(stack.height / 2, stack.width / 2, orientation);
}

}  // namespace colvis
