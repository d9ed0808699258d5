#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "colvis/commands.hpp"
#include "colvis/config.hpp"

namespace {

using nlohmann::ordered_json;

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// "section.key=value"; value is parsed as JSON when possible, else kept
// as a string (so --set io.output_dir=out/a needs no quoting).
void apply_override(ordered_json& root, const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0)
        throw std::runtime_error("bad --set, expected section.key=value: " + spec);
    const std::string path = spec.substr(0, eq);
    const std::string raw = spec.substr(eq + 1);

    ordered_json value;
    try {
        value = ordered_json::parse(raw);
    } catch (const ordered_json::parse_error&) {
        value = raw;
    }

    ordered_json* node = &root;
    std::size_t start = 0;
    for (;;) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot - start);
        if (key.empty()) throw std::runtime_error("bad --set path: " + spec);
        if (dot == std::string::npos) {
            (*node)[key] = value;
            break;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

int report(const colvis::CommandResult& res) {
    std::printf("%s\n", res.summary.c_str());
    for (const auto& line : res.details) std::printf("%s\n", line.c_str());
    return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"collinearity vision engine: recurrent lateral-connectivity image analysis"};
    app.require_subcommand(1);
    app.fallthrough();  // accept global flags after the subcommand name

    std::string config_path;
    std::string output_dir;
    std::vector<std::string> overrides;
    bool no_png = false;
    bool no_csv = false;
    app.add_option("-c,--config", config_path, "JSON config file (defaults used for absent keys)")
        ->check(CLI::ExistingFile);
    app.add_option("-o,--output-dir", output_dir, "directory for artifacts (overrides config)");
    app.add_option("--set", overrides,
                   "override one config value, e.g. --set dynamics.epsilon=1e-5 (repeatable)");
    app.add_flag("--no-png", no_png, "skip PNG artifacts");
    app.add_flag("--no-csv", no_csv, "skip CSV artifacts");

    std::vector<std::string> images;
    bool baseline = false;
    std::string mode = "concat";
    std::string experiment;

    auto* run = app.add_subcommand("run", "full pipeline maps for each image");
    run->add_option("images", images, "input images (PNG or PGM)")
        ->required()
        ->check(CLI::ExistingFile);

    auto* wafer = app.add_subcommand("wafer", "fault response and binary fault map");
    wafer->add_option("images", images, "input images")->required()->check(CLI::ExistingFile);

    auto* sem = app.add_subcommand("sem", "saliency map and ranked inspection ROIs");
    sem->add_option("images", images, "input images")->required()->check(CLI::ExistingFile);
    sem->add_flag("--baseline", baseline, "rank by pooled activity instead of collinearity");

    auto* exportc = app.add_subcommand("export-channels", "training-input exports");
    exportc->add_option("images", images, "input images")->required()->check(CLI::ExistingFile);
    exportc->add_option("--mode", mode, "concat | suppress")
        ->check(CLI::IsMember({"concat", "suppress"}));

    auto* exper = app.add_subcommand("experiment", "synthetic-stimulus experiment with property band");
    exper->add_option("name", experiment, "experiment name")->required();

    app.add_subcommand("kernels", "dump Gabor bank and collinearity kernels as CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        ordered_json root = config_path.empty()
                                ? ordered_json::object()
                                : ordered_json::parse(read_text(config_path));
        for (const auto& spec : overrides) apply_override(root, spec);
        if (!output_dir.empty()) root["io"]["output_dir"] = output_dir;
        if (no_png) root["io"]["png"] = false;
        if (no_csv) root["io"]["csv"] = false;

        const std::string origin = config_path.empty() ? "<defaults>" : config_path;
        const colvis::RunConfig cfg = colvis::parse_config(root.dump(), origin);

        int exit_code = 0;
        auto run_batch = [&](auto&& fn) {
            for (const auto& image : images) {
                try {
                    exit_code = std::max(exit_code, report(fn(image)));
                } catch (const std::exception& e) {
                    std::fprintf(stderr, "%s: %s\n", image.c_str(), e.what());
                    exit_code = 1;
                }
            }
        };

        if (*run) {
            run_batch([&](const std::string& p) { return colvis::cmd_run(p, cfg); });
        } else if (*wafer) {
            run_batch([&](const std::string& p) { return colvis::cmd_wafer(p, cfg); });
        } else if (*sem) {
            run_batch([&](const std::string& p) { return colvis::cmd_sem(p, cfg, baseline); });
        } else if (*exportc) {
            run_batch([&](const std::string& p) { return colvis::cmd_export_channels(p, cfg, mode); });
        } else if (*exper) {
            exit_code = report(colvis::cmd_experiment(experiment, cfg));
        } else {
            exit_code = report(colvis::cmd_kernels(cfg));
        }
        return exit_code;
    } catch (const colvis::ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
