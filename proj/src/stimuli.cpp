#include "colvis/stimuli.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "colvis/gabor.hpp"

namespace colvis {

PatchRender gabor_patch_stimulus(const PatchStimulusSpec& spec) {
    if (spec.patch_size < 3 || spec.patch_size % 2 == 0)
        throw std::invalid_argument("gabor_patch_stimulus: patch size must be odd and >= 3");
    const int half = (spec.patch_size - 1) / 2;
    const double f =
        spec.frequency > 0.0 ? spec.frequency : 1.0 / lambda_from_kernel(spec.patch_size);
    const double s = spec.sigma > 0.0 ? spec.sigma : 0.4 * spec.patch_size;

    PatchRender render;
    render.image = GrayImage(spec.height, spec.width, spec.background);
    GrayImage& img = render.image;
    for (const GaborPatchElement& e : spec.elements) {
        if (e.row - half < 0 || e.row + half >= spec.height || e.col - half < 0 ||
            e.col + half >= spec.width)
            throw std::invalid_argument("gabor_patch_stimulus: element outside canvas");
        if (e.contrast < 0.0 || e.contrast > 1.0)
            throw std::invalid_argument("gabor_patch_stimulus: contrast outside [0,1]");
        std::vector<double> g = gabor_waveform(spec.patch_size, e.theta, f, s, s, spec.psi);
        double peak = 0.0;
        for (double v : g) peak = std::max(peak, std::abs(v));
        for (int dr = -half; dr <= half; ++dr)
            for (int dc = -half; dc <= half; ++dc)
                img.at(e.row + dr, e.col + dc) +=
                    e.contrast * g[static_cast<size_t>(dr + half) * spec.patch_size + (dc + half)] /
                    peak;
    }
    for (double& v : img.data) {
        if (v < 0.0) {
            v = 0.0;
            ++render.clipped_pixels;
        } else if (v > 1.0) {
            v = 1.0;
            ++render.clipped_pixels;
        }
    }
    return render;
}

namespace {

void draw_hline(GrayImage& img, int cy, int cx, int length, int thickness, double value) {
    const int r0 = std::max(0, cy - thickness / 2);
    const int r1 = std::min(img.height, cy - thickness / 2 + thickness);
    const int c0 = std::max(0, cx - length / 2);
    const int c1 = std::min(img.width, cx - length / 2 + length);
    for (int r = r0; r < r1; ++r)
        for (int c = c0; c < c1; ++c) img.at(r, c) = value;
}

}  // namespace

GrayImage line_stimulus(const LineStimulusSpec& spec) {
    if (spec.length > spec.width)
        throw std::invalid_argument("line_stimulus: length exceeds canvas width");
    if (spec.contrast < 0.0 || spec.contrast > 1.0 ||
        (spec.has_gap && (spec.gap_contrast < 0.0 || spec.gap_contrast > 1.0)))
        throw std::invalid_argument("line_stimulus: contrast outside [0,1]");
    GrayImage img(spec.height, spec.width, 0.0);
    const int cy = spec.height / 2;
    const int cx = spec.width / 2;
    draw_hline(img, cy, cx, spec.length, spec.thickness, spec.contrast);
    if (spec.has_gap)
        draw_hline(img, cy, cx, spec.gap_length, spec.thickness, spec.gap_contrast);
    return img;
}

int nearest_orientation_plane(const std::vector<double>& thetas, double theta) {
    if (thetas.empty()) throw std::invalid_argument("nearest_orientation_plane: empty bank");
    constexpr double pi = std::numbers::pi;
    int best = 0;
    double best_d = pi;
    for (size_t i = 0; i < thetas.size(); ++i) {
        double d = std::fmod(std::abs(thetas[i] - theta), pi);
        d = std::min(d, pi - d);
        if (d < best_d - 1e-12) {
            best_d = d;
            best = static_cast<int>(i);
        }
    }
    return best;
}

namespace {

struct Readout {
    double response;  // collinearity layer
    double control;   // pooled layer
};

Readout run_and_read(const GrayImage& img, const ExperimentConfig& cfg, double target_theta) {
    ModelOutput out = run_model(img, cfg.model);
    const int plane =
        nearest_orientation_plane(cfg.model.gabor.resolved_orientations(), target_theta);
    return {central_readout(out.col, plane), central_readout(out.pooled, plane)};
}

GrayImage triplet(const ExperimentConfig& cfg, double target_contrast, double flanker_theta,
                  double flanker_contrast, int distance_px) {
    PatchStimulusSpec spec;
    spec.height = cfg.patch_canvas_height;
    spec.width = cfg.patch_canvas_width;
    spec.patch_size = cfg.model.gabor.kernel_size;
    const int cy = spec.height / 2;
    const int cx = spec.width / 2;
    spec.elements = {{cy, cx, 0.0, target_contrast},
                     {cy, cx + distance_px, flanker_theta, flanker_contrast},
                     {cy, cx - distance_px, flanker_theta, flanker_contrast}};
    return gabor_patch_stimulus(spec).image;
}

LineStimulusSpec base_line(const ExperimentConfig& cfg) {
    LineStimulusSpec spec;
    spec.height = cfg.line_canvas_height;
    spec.width = cfg.line_canvas_width;
    spec.thickness = cfg.line_thickness;
    return spec;
}

// First, middle and last grid point carry a row slice of the response.
bool wants_profile(size_t index, size_t grid_size) {
    return index == 0 || index == (grid_size - 1) / 2 || index + 1 == grid_size;
}

void sweep_point(SweepResult& sweep, size_t index, size_t grid_size, const GrayImage& img,
                 const ExperimentConfig& cfg, bool with_profile) {
    ModelOutput out = run_model(img, cfg.model);
    const int plane = nearest_orientation_plane(cfg.model.gabor.resolved_orientations(), 0.0);
    sweep.response.push_back(central_readout(out.col, plane));
    sweep.control.push_back(central_readout(out.pooled, plane));
    if (with_profile && wants_profile(index, grid_size)) {
        sweep.profile_points.push_back(static_cast<int>(index));
        sweep.profiles.push_back(slice_profile(out.col, out.col.height / 2, plane));
    }
}

}  // namespace

BasicComparison run_basic_comparison(const ExperimentConfig& cfg) {
    const int d = cfg.flanker_distance * lambda_from_kernel(cfg.model.gabor.kernel_size);
    BasicComparison result;
    Readout aligned =
        run_and_read(triplet(cfg, cfg.target_contrast, 0.0, cfg.flanker_contrast, d), cfg, 0.0);
    Readout orth = run_and_read(
        triplet(cfg, cfg.target_contrast, std::numbers::pi / 2, cfg.flanker_contrast, d), cfg, 0.0);
    result.collinear = aligned.response;
    result.collinear_control = aligned.control;
    result.orthogonal = orth.response;
    result.orthogonal_control = orth.control;
    return result;
}

SweepResult contrast_sweep_gap(const std::vector<double>& grid, const ExperimentConfig& cfg) {
    SweepResult sweep;
    sweep.variable = "target_contrast";
    for (size_t i = 0; i < grid.size(); ++i) {
        LineStimulusSpec spec = base_line(cfg);
        spec.length = cfg.gap_line_length;
        spec.contrast = cfg.flanker_contrast;
        spec.has_gap = true;
        spec.gap_length = cfg.gap_length;
        spec.gap_contrast = grid[i];
        GrayImage img = line_stimulus(spec);
        sweep.values.push_back(grid[i]);
        sweep_point(sweep, i, grid.size(), img, cfg, true);
    }
    return sweep;
}

SweepResult contrast_sweep_line(const std::vector<double>& grid, const ExperimentConfig& cfg) {
    SweepResult sweep;
    sweep.variable = "line_contrast";
    for (size_t i = 0; i < grid.size(); ++i) {
        LineStimulusSpec spec = base_line(cfg);
        spec.length = cfg.full_line_length;
        spec.contrast = grid[i];
        GrayImage img = line_stimulus(spec);
        sweep.values.push_back(grid[i]);
        sweep_point(sweep, i, grid.size(), img, cfg, true);
    }
    return sweep;
}

SweepResult length_sweep(const std::vector<int>& grid, const ExperimentConfig& cfg) {
    SweepResult sweep;
    sweep.variable = "length_px";
    for (size_t i = 0; i < grid.size(); ++i) {
        LineStimulusSpec spec = base_line(cfg);
        spec.length = grid[i];
        spec.contrast = cfg.target_contrast;
        GrayImage img = line_stimulus(spec);
        sweep.values.push_back(grid[i]);
        sweep_point(sweep, i, grid.size(), img, cfg, true);
    }
    return sweep;
}

SweepResult flanker_distance_sweep(const std::vector<int>& grid, const ExperimentConfig& cfg) {
    const int lambda = lambda_from_kernel(cfg.model.gabor.kernel_size);
    SweepResult sweep;
    sweep.variable = "distance_lambda";
    for (int d : grid) {
        Readout r = run_and_read(
            triplet(cfg, cfg.target_contrast, 0.0, cfg.target_contrast, d * lambda), cfg, 0.0);
        sweep.values.push_back(d);
        sweep.response.push_back(r.response);
        sweep.control.push_back(r.control);
    }
    return sweep;
}

SweepResult rotation_tuning(const std::vector<double>& grid_deg, const ExperimentConfig& cfg) {
    const int d = cfg.flanker_distance * lambda_from_kernel(cfg.model.gabor.kernel_size);
    SweepResult sweep;
    sweep.variable = "flanker_rotation_deg";
    for (double deg : grid_deg) {
        const double theta = deg * std::numbers::pi / 180.0;
        Readout r = run_and_read(triplet(cfg, cfg.target_contrast, theta, cfg.flanker_contrast, d),
                                 cfg, 0.0);
        sweep.values.push_back(deg);
        sweep.response.push_back(r.response);
        sweep.control.push_back(r.control);
    }
    double peak = 0.0;
    for (size_t i = 0; i < sweep.response.size(); ++i)
        peak = std::max(peak, sweep.response[i] / sweep.control[i] - 1.0);
    sweep.normalized.resize(sweep.response.size(), 0.0);
    if (peak > 0.0)
        for (size_t i = 0; i < sweep.response.size(); ++i)
            sweep.normalized[i] = (sweep.response[i] / sweep.control[i] - 1.0) / peak;
    return sweep;
}

}  // namespace colvis
