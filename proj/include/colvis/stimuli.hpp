#pragma once

#include <string>
#include <vector>

#include "colvis/core.hpp"
#include "colvis/pipeline.hpp"

namespace colvis {

struct GaborPatchElement {
    int row = 0;
    int col = 0;
    double theta = 0.0;
    double contrast = 0.5;  // amplitude relative to the carrier peak
};

struct PatchStimulusSpec {
    int height = 256;
    int width = 256;
    double background = 127.0 / 255.0;
    int patch_size = 11;    // sampled on the same grid as the matching filter
    double frequency = 0.0; // <= 0 -> 1 / lambda_from_kernel(patch_size)
    double sigma = 0.0;     // <= 0 -> 0.4 * patch_size
    double psi = 0.0;
    std::vector<GaborPatchElement> elements;
};

struct PatchRender {
    GrayImage image;
    int clipped_pixels = 0;  // overlap or contrast overflow, warning metadata
};

// Additive rendering on the gray background, clipped to [0,1] at the end.
PatchRender gabor_patch_stimulus(const PatchStimulusSpec& spec);

struct LineStimulusSpec {
    int height = 64;
    int width = 320;
    int thickness = 3;
    int length = 91;
    double contrast = 0.5;   // |I - I_bg| in [0,1] units; background is black
    bool has_gap = false;
    int gap_length = 0;      // central segment redrawn at gap_contrast
    double gap_contrast = 0.0;
};

GrayImage line_stimulus(const LineStimulusSpec& spec);

// Shared layout of the experiment suite. Targets sit at the canvas center
// (floor(H/2), floor(W/2)); flankers go on the horizontal axis.
struct ExperimentConfig {
    ModelParams model;
    int patch_canvas_height = 256;
    int patch_canvas_width = 256;
    int line_canvas_height = 64;
    int line_canvas_width = 320;
    int line_thickness = 3;
    double target_contrast = 0.5;
    double flanker_contrast = 127.0 / 255.0;  // illuminance-127 convention
    int flanker_distance = 8;                 // lambda units, triplet layouts
    int full_line_length = 91;                // covers the flanker-to-flanker extent
    int gap_line_length = 271;
    int gap_length = 31;
};

struct BasicComparison {
    double collinear = 0.0;
    double orthogonal = 0.0;
    double collinear_control = 0.0;   // pooled readouts of the same runs
    double orthogonal_control = 0.0;
};

struct SweepResult {
    std::string variable;
    std::vector<double> values;
    std::vector<double> response;   // central collinearity readout
    std::vector<double> control;    // central pooled readout
    std::vector<double> normalized; // rotation_tuning only: enhancement / peak
    std::vector<int> profile_points;            // indices into values
    std::vector<std::vector<double>> profiles;  // response row slices there
};

// Plane whose orientation is closest to theta modulo pi.
int nearest_orientation_plane(const std::vector<double>& thetas, double theta);

// Aligned vs 90-degree-rotated flanker triplet, central readouts.
BasicComparison run_basic_comparison(const ExperimentConfig& cfg);

// Central line element of swept contrast between two fixed-contrast outer
// line segments.
SweepResult contrast_sweep_gap(const std::vector<double>& grid, const ExperimentConfig& cfg);

// One full line, contrast swept.
SweepResult contrast_sweep_line(const std::vector<double>& grid, const ExperimentConfig& cfg);

// One full line at target contrast, length swept.
SweepResult length_sweep(const std::vector<int>& grid, const ExperimentConfig& cfg);

// Patch triplet, center-to-flanker distance swept in lambda units; all three
// patches share the target contrast.
SweepResult flanker_distance_sweep(const std::vector<int>& grid, const ExperimentConfig& cfg);

// Patch triplet with fixed flanker positions; only the flanker orientation
// rotates (degrees grid).
SweepResult rotation_tuning(const std::vector<double>& grid_deg, const ExperimentConfig& cfg);

}  // namespace colvis
