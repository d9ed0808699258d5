#pragma once

#include <string>
#include <vector>

#include "colvis/collinearity.hpp"
#include "colvis/detectors.hpp"
#include "colvis/gabor.hpp"
#include "colvis/pipeline.hpp"
#include "colvis/pooling.hpp"

namespace colvis {

struct IoConfig {
    std::string output_dir = ".";
    bool png = true;
    bool csv = true;
};

// Every scientific parameter with its published default. A config file only
// overrides what it names.
struct RunConfig {
    GaborConfig gabor;
    PoolingConfig pooling;
    CollinearityKernelConfig kernel;  // band geometry; lambda derives from the bank
    DynamicsConfig dynamics;
    DetectorConfig detector;
    IoConfig io;

    ModelParams model_params() const { return {gabor, pooling, kernel, dynamics}; }
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& report) : std::runtime_error(report) {}
};

// JSON object tree; unknown keys and invalid values are collected and
// reported together in one ConfigError.
RunConfig parse_config(const std::string& text, const std::string& origin);

RunConfig load_config(const std::string& path);

// Resolved-values echo (defaults materialized) for run manifests.
std::string config_json(const RunConfig& cfg);

}  // namespace colvis
