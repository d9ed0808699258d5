#pragma once

#include <string>
#include <vector>

#include "colvis/config.hpp"

namespace colvis {

struct CommandResult {
    int exit_code = 0;
    std::string summary;                 // one line for stdout
    std::vector<std::string> details;    // diagnostic lines (band failures etc.)
    std::vector<std::string> artifacts;  // files written, in order
};

// Pipeline maps (gabor/pooled/collinearity maxima, difference) for one image.
CommandResult cmd_run(const std::string& image_path, const RunConfig& cfg);

// Difference, fault response, and binary fault detector maps.
CommandResult cmd_wafer(const std::string& image_path, const RunConfig& cfg);

// Saliency map, ROI list JSON, ROI crops; baseline switches the saliency
// source from the collinearity layer to the pooled layer.
CommandResult cmd_sem(const std::string& image_path, const RunConfig& cfg, bool baseline);

// mode "concat": intensity + upsampled fault response planes as two PNGs.
// mode "suppress": single PNG with collinear structure blended to the mean.
CommandResult cmd_export_channels(const std::string& image_path, const RunConfig& cfg,
                                  const std::string& mode);

// name: basic | contrast-gap | contrast-line | length | flanker-distance |
// rotation | occlusion. Writes the sweep CSVs and evaluates the built-in
// property band; band failure -> nonzero exit code.
CommandResult cmd_experiment(const std::string& name, const RunConfig& cfg);

// Gabor bank + pipeline collinearity kernels as CSV matrices.
CommandResult cmd_kernels(const RunConfig& cfg);

std::vector<std::string> experiment_names();

}  // namespace colvis
