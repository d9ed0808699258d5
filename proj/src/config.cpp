#include "colvis/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace colvis {

namespace {

using nlohmann::ordered_json;

struct Collector {
    std::string origin;
    std::vector<std::string> errors;

    void add(const std::string& path, const std::string& what) {
        errors.push_back(path + ": " + what);
    }
    void require(bool ok, const std::string& path, const std::string& what) {
        if (!ok) add(path, what);
    }
    [[noreturn]] void fail() const {
        std::string report = origin + ": invalid config";
        for (const std::string& e : errors) report += "\n  - " + e;
        throw ConfigError(report);
    }
};

double num(const ordered_json& v, const std::string& path, Collector& errs, double fallback) {
    if (!v.is_number()) {
        errs.add(path, "expected a number");
        return fallback;
    }
    return v.get<double>();
}

int integer(const ordered_json& v, const std::string& path, Collector& errs, int fallback) {
    if (!v.is_number_integer()) {
        errs.add(path, "expected an integer");
        return fallback;
    }
    return v.get<int>();
}

bool boolean(const ordered_json& v, const std::string& path, Collector& errs, bool fallback) {
    if (!v.is_boolean()) {
        errs.add(path, "expected true or false");
        return fallback;
    }
    return v.get<bool>();
}

void parse_gabor(const ordered_json& j, GaborConfig& cfg, Collector& errs) {
    for (const auto& [key, value] : j.items()) {
        const std::string path = "gabor." + key;
        if (key == "kernel_size") {
            cfg.kernel_size = integer(value, path, errs, cfg.kernel_size);
        } else if (key == "orientations") {
            if (value.is_number_integer()) {
                const int n = value.get<int>();
                if (n < 1) {
                    errs.add(path, "orientation count must be >= 1");
                } else {
                    cfg.orientations.clear();
                    for (int i = 0; i < n; ++i)
                        cfg.orientations.push_back(i * 2.0 * std::numbers::pi / n);
                }
            } else if (value.is_array()) {
                cfg.orientations.clear();
                for (const auto& t : value)
                    cfg.orientations.push_back(num(t, path + "[]", errs, 0.0));
                if (cfg.orientations.empty()) errs.add(path, "orientation list is empty");
            } else {
                errs.add(path, "expected a count or a list of angles in radians");
            }
        } else if (key == "psi") {
            cfg.psi = num(value, path, errs, cfg.psi);
        } else if (key == "frequency") {
            cfg.frequency = num(value, path, errs, cfg.frequency);
        } else if (key == "sigma1") {
            cfg.sigma1 = num(value, path, errs, cfg.sigma1);
        } else if (key == "sigma2") {
            cfg.sigma2 = num(value, path, errs, cfg.sigma2);
        } else if (key == "fold_symmetric") {
            cfg.fold_symmetric = boolean(value, path, errs, cfg.fold_symmetric);
        } else {
            errs.add(path, "unknown key");
        }
    }
}

void parse_kernel(const ordered_json& j, CollinearityKernelConfig& cfg, Collector& errs) {
    for (const auto& [key, value] : j.items()) {
        const std::string path = "kernel." + key;
        if (key == "inner_start")
            cfg.inner_start = num(value, path, errs, cfg.inner_start);
        else if (key == "plateau_end")
            cfg.plateau_end = num(value, path, errs, cfg.plateau_end);
        else if (key == "outer_end")
            cfg.outer_end = num(value, path, errs, cfg.outer_end);
        else if (key == "half_width")
            cfg.half_width = num(value, path, errs, cfg.half_width);
        else
            errs.add(path, "unknown key");
    }
}

void parse_dynamics(const ordered_json& j, DynamicsConfig& cfg, Collector& errs) {
    for (const auto& [key, value] : j.items()) {
        const std::string path = "dynamics." + key;
        if (key == "w_col")
            cfg.w_col = num(value, path, errs, cfg.w_col);
        else if (key == "tau_ms")
            cfg.tau_ms = num(value, path, errs, cfg.tau_ms);
        else if (key == "dt_ms")
            cfg.dt_ms = num(value, path, errs, cfg.dt_ms);
        else if (key == "epsilon")
            cfg.epsilon = num(value, path, errs, cfg.epsilon);
        else if (key == "max_steps")
            cfg.max_steps = integer(value, path, errs, cfg.max_steps);
        else
            errs.add(path, "unknown key");
    }
}

void parse_detector(const ordered_json& j, DetectorConfig& cfg, Collector& errs) {
    for (const auto& [key, value] : j.items()) {
        const std::string path = "detector." + key;
        if (key == "activity_threshold")
            cfg.activity_threshold = num(value, path, errs, cfg.activity_threshold);
        else if (key == "suppression_threshold")
            cfg.suppression_threshold = num(value, path, errs, cfg.suppression_threshold);
        else if (key == "fault_threshold")
            cfg.fault_threshold = num(value, path, errs, cfg.fault_threshold);
        else if (key == "ior_radius")
            cfg.ior_radius = integer(value, path, errs, cfg.ior_radius);
        else if (key == "max_rois")
            cfg.max_rois = integer(value, path, errs, cfg.max_rois);
        else if (key == "saliency_stop")
            cfg.saliency_stop = num(value, path, errs, cfg.saliency_stop);
        else
            errs.add(path, "unknown key");
    }
}

void parse_io(const ordered_json& j, IoConfig& cfg, Collector& errs) {
    for (const auto& [key, value] : j.items()) {
        const std::string path = "io." + key;
        if (key == "output_dir") {
            if (value.is_string())
                cfg.output_dir = value.get<std::string>();
            else
                errs.add(path, "expected a string");
        } else if (key == "png") {
            cfg.png = boolean(value, path, errs, cfg.png);
        } else if (key == "csv") {
            cfg.csv = boolean(value, path, errs, cfg.csv);
        } else {
            errs.add(path, "unknown key");
        }
    }
}

void validate(const RunConfig& cfg, Collector& errs) {
    errs.require(cfg.gabor.kernel_size >= 3 && cfg.gabor.kernel_size % 2 == 1,
                 "gabor.kernel_size", "must be odd and >= 3");
    for (double t : cfg.gabor.orientations)
        errs.require(std::isfinite(t), "gabor.orientations", "angles must be finite");
    errs.require(std::isfinite(cfg.gabor.psi), "gabor.psi", "must be finite");
    errs.require(cfg.pooling.p >= 1, "pooling.p", "must be >= 1");
    errs.require(cfg.kernel.inner_start > 0, "kernel.inner_start", "must be > 0");
    errs.require(cfg.kernel.plateau_end > cfg.kernel.inner_start, "kernel.plateau_end",
                 "must exceed inner_start");
    errs.require(cfg.kernel.outer_end > cfg.kernel.plateau_end, "kernel.outer_end",
                 "must exceed plateau_end");
    errs.require(cfg.kernel.half_width > 0, "kernel.half_width", "must be > 0");
    errs.require(cfg.dynamics.w_col >= 0, "dynamics.w_col", "must be >= 0");
    errs.require(cfg.dynamics.tau_ms > 0, "dynamics.tau_ms", "must be > 0");
    errs.require(cfg.dynamics.dt_ms > 0 && cfg.dynamics.dt_ms <= cfg.dynamics.tau_ms,
                 "dynamics.dt_ms", "must be in (0, tau_ms]");
    errs.require(cfg.dynamics.epsilon > 0, "dynamics.epsilon", "must be > 0");
    errs.require(cfg.dynamics.max_steps >= 1, "dynamics.max_steps", "must be >= 1");
    auto unit = [&](double v, const char* name) {
        errs.require(v >= 0.0 && v <= 1.0, name, "must be in [0,1]");
    };
    unit(cfg.detector.activity_threshold, "detector.activity_threshold");
    unit(cfg.detector.suppression_threshold, "detector.suppression_threshold");
    unit(cfg.detector.fault_threshold, "detector.fault_threshold");
    unit(cfg.detector.saliency_stop, "detector.saliency_stop");
    errs.require(cfg.detector.ior_radius >= 1, "detector.ior_radius", "must be >= 1");
    errs.require(cfg.detector.max_rois >= 1, "detector.max_rois", "must be >= 1");
    errs.require(!cfg.io.output_dir.empty(), "io.output_dir", "must not be empty");
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& origin) {
    Collector errs{origin, {}};
    ordered_json root;
    try {
        root = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        errs.add("(file)", e.what());
        errs.fail();
    }
    if (!root.is_object()) {
        errs.add("(file)", "top level must be an object");
        errs.fail();
    }

    RunConfig cfg;
    for (const auto& [key, value] : root.items()) {
        if (!value.is_object()) {
            errs.add(key, "expected an object");
            continue;
        }
        if (key == "gabor")
            parse_gabor(value, cfg.gabor, errs);
        else if (key == "pooling")
            for (const auto& [k2, v2] : value.items()) {
                if (k2 == "p")
                    cfg.pooling.p = integer(v2, "pooling.p", errs, cfg.pooling.p);
                else
                    errs.add("pooling." + k2, "unknown key");
            }
        else if (key == "kernel")
            parse_kernel(value, cfg.kernel, errs);
        else if (key == "dynamics")
            parse_dynamics(value, cfg.dynamics, errs);
        else if (key == "detector")
            parse_detector(value, cfg.detector, errs);
        else if (key == "io")
            parse_io(value, cfg.io, errs);
        else
            errs.add(key, "unknown section");
    }
    validate(cfg, errs);
    if (!errs.errors.empty()) errs.fail();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

std::string config_json(const RunConfig& cfg) {
    ordered_json j;
    j["gabor"]["kernel_size"] = cfg.gabor.kernel_size;
    j["gabor"]["orientations"] = cfg.gabor.resolved_orientations();
    j["gabor"]["psi"] = cfg.gabor.psi;
    j["gabor"]["frequency"] = cfg.gabor.resolved_frequency();
    j["gabor"]["sigma1"] = cfg.gabor.resolved_sigma1();
    j["gabor"]["sigma2"] = cfg.gabor.resolved_sigma2();
    j["gabor"]["fold_symmetric"] = cfg.gabor.fold_symmetric;
    j["pooling"]["p"] = cfg.pooling.p;
    j["kernel"]["inner_start"] = cfg.kernel.inner_start;
    j["kernel"]["plateau_end"] = cfg.kernel.plateau_end;
    j["kernel"]["outer_end"] = cfg.kernel.outer_end;
    j["kernel"]["half_width"] = cfg.kernel.half_width;
    j["dynamics"]["w_col"] = cfg.dynamics.w_col;
    j["dynamics"]["tau_ms"] = cfg.dynamics.tau_ms;
    j["dynamics"]["dt_ms"] = cfg.dynamics.dt_ms;
    j["dynamics"]["epsilon"] = cfg.dynamics.epsilon;
    j["dynamics"]["max_steps"] = cfg.dynamics.max_steps;
    j["detector"]["activity_threshold"] = cfg.detector.activity_threshold;
    j["detector"]["suppression_threshold"] = cfg.detector.suppression_threshold;
    j["detector"]["fault_threshold"] = cfg.detector.fault_threshold;
    j["detector"]["ior_radius"] = cfg.detector.ior_radius;
    j["detector"]["max_rois"] = cfg.detector.max_rois;
    j["detector"]["saliency_stop"] = cfg.detector.saliency_stop;
    j["io"]["output_dir"] = cfg.io.output_dir;
    j["io"]["png"] = cfg.io.png;
    j["io"]["csv"] = cfg.io.csv;
    return j.dump(2);
}

}  // namespace colvis
