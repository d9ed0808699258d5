#include "colvis/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "colvis/detectors.hpp"
#include "colvis/io.hpp"
#include "colvis/synthetic.hpp"
#include "json.hpp"

namespace colvis {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

bool verbose() {
    static const bool on = [] {
        const char* v = std::getenv("COLVIS_VERBOSE");
        return v && *v && std::string(v) != "0";
    }();
    return on;
}

std::string stem_of(const std::string& path) {
    return fs::path(path).stem().string();
}

struct Emitter {
    const RunConfig& cfg;
    CommandResult& result;
    fs::path dir;

    Emitter(const RunConfig& c, CommandResult& r) : cfg(c), result(r), dir(c.io.output_dir) {
        fs::create_directories(dir);
    }

    std::string note(const std::string& name) {
        const std::string path = (dir / name).string();
        result.artifacts.push_back(path);
        if (verbose()) std::fprintf(stderr, "wrote %s\n", path.c_str());
        return path;
    }

    // PNG gets the unit-normalized view; CSV keeps raw values.
    void map_artifacts(const std::string& name, const ScalarMap& map, bool normalize_png) {
        if (cfg.io.png)
            write_png16(note(name + ".png"), normalize_png ? normalize_unit(map) : map);
        if (cfg.io.csv) write_csv(note(name + ".csv"), map);
    }

    void manifest(const std::string& command, const std::string& input_path) {
        ordered_json j;
        j["command"] = command;
        if (!input_path.empty()) {
            j["input"]["path"] = input_path;
            j["input"]["sha256"] = sha256_file(input_path);
        }
        j["config"] = ordered_json::parse(config_json(cfg));
        const int lambda = lambda_from_kernel(cfg.gabor.kernel_size);
        j["derived"]["lambda_px"] = lambda;
        j["derived"]["kernel_lambda_pooled"] = static_cast<double>(lambda) / cfg.pooling.p;
        j["artifacts"] = ordered_json::array();
        for (const std::string& a : result.artifacts)
            j["artifacts"].push_back(fs::path(a).filename().string());
        write_text(note(command + "_manifest.json"), j.dump(2) + "\n");
    }
};

GrayImage crop(const GrayImage& img, const Roi& roi) {
    GrayImage out(std::max(1, roi.height), std::max(1, roi.width));
    for (int r = 0; r < out.height; ++r)
        for (int c = 0; c < out.width; ++c) out.at(r, c) = img.at(roi.top + r, roi.left + c);
    return out;
}

struct BandCheck {
    bool pass = true;
    std::vector<std::string> lines;

    void expect(bool ok, const std::string& what) {
        lines.push_back(std::string(ok ? "  ok   " : "  FAIL ") + what);
        pass = pass && ok;
    }
};

double ratio_at(const SweepResult& sweep, size_t i) {
    return sweep.control[i] > 0.0 ? sweep.response[i] / sweep.control[i] : 0.0;
}

}  // namespace

std::vector<std::string> experiment_names() {
    return {"basic",  "contrast-gap",     "contrast-line", "length",
            "rotation", "flanker-distance", "occlusion"};
}

CommandResult cmd_run(const std::string& image_path, const RunConfig& cfg) {
    CommandResult result;
    Emitter out(cfg, result);
    const GrayImage img = read_image(image_path);
    const ModelOutput model = run_model(img, cfg.model_params());
    const std::string stem = stem_of(image_path);

    out.map_artifacts(stem + "_gabor_max", max_over_orientations(model.gabor), true);
    out.map_artifacts(stem + "_pooled_max", max_over_orientations(model.pooled), true);
    out.map_artifacts(stem + "_collinearity_max", max_over_orientations(model.col), true);
    out.map_artifacts(stem + "_difference", difference_map(model.col, model.pooled), true);
    out.manifest("run", image_path);

    std::ostringstream s;
    s << image_path << ": " << img.height << "x" << img.width << " -> pooled "
      << model.pooled.height << "x" << model.pooled.width << ", converged in " << model.steps
      << " steps (residual " << format_double(model.residual) << ")";
    result.summary = s.str();
    return result;
}

CommandResult cmd_wafer(const std::string& image_path, const RunConfig& cfg) {
    CommandResult result;
    Emitter out(cfg, result);
    const GrayImage img = read_image(image_path);
    const ModelOutput model = run_model(img, cfg.model_params());
    const ScalarMap pooled_img = pool_image(img, cfg.pooling);
    const ScalarMap diff = difference_map(model.col, model.pooled);
    const ScalarMap response = fault_response_map(diff, pooled_img, cfg.detector);
    const ScalarMap detector = fault_detector(response, cfg.detector);
    const std::string stem = stem_of(image_path);

    out.map_artifacts(stem + "_difference", diff, true);
    out.map_artifacts(stem + "_fault_response", response, false);
    out.map_artifacts(stem + "_fault_detector", detector, false);
    out.manifest("wafer", image_path);

    long marked = 0;
    for (double v : detector.data) marked += v > 0.5;
    result.summary = image_path + ": " + std::to_string(marked) + " fault pixels on the " +
                     std::to_string(detector.height) + "x" + std::to_string(detector.width) +
                     " pooled grid";
    return result;
}

CommandResult cmd_sem(const std::string& image_path, const RunConfig& cfg, bool baseline) {
    CommandResult result;
    Emitter out(cfg, result);
    const GrayImage img = read_image(image_path);
    const ModelOutput model = run_model(img, cfg.model_params());
    const ScalarMap pooled_img = pool_image(img, cfg.pooling);
    const ScalarMap sal = baseline ? baseline_saliency(model.pooled, pooled_img, cfg.detector)
                                   : saliency_map(model.col, pooled_img, cfg.detector);
    const RoiList rois =
        extract_rois_with_ior(sal, cfg.detector, cfg.pooling.p, img.height, img.width);
    const std::string stem = stem_of(image_path) + (baseline ? "_baseline" : "");

    out.map_artifacts(stem + "_saliency", sal, false);
    write_text(out.note(stem + "_rois.json"), roi_list_json(rois));
    if (cfg.io.png)
        for (const Roi& roi : rois)
            write_png16(out.note(stem + "_roi_" + std::to_string(roi.rank) + ".png"),
                        crop(img, roi));
    out.manifest(baseline ? "sem_baseline" : "sem", image_path);

    result.summary = image_path + ": " + std::to_string(rois.size()) + " rois (" +
                     (baseline ? "pooled baseline" : "collinearity") + " saliency)";
    return result;
}

CommandResult cmd_export_channels(const std::string& image_path, const RunConfig& cfg,
                                  const std::string& mode) {
    if (mode != "concat" && mode != "suppress")
        throw std::invalid_argument("export-channels mode must be concat or suppress");
    CommandResult result;
    Emitter out(cfg, result);
    const GrayImage img = read_image(image_path);
    const ModelOutput model = run_model(img, cfg.model_params());
    const ScalarMap diff = difference_map(model.col, model.pooled);
    const std::string stem = stem_of(image_path);

    if (mode == "concat") {
        const ScalarMap pooled_img = pool_image(img, cfg.pooling);
        const ScalarMap response = fault_response_map(diff, pooled_img, cfg.detector);
        FeatureStack planes = channel_concat_export(img, response, cfg.pooling.p);
        GrayImage plane(img.height, img.width);
        std::copy(planes.plane(0), planes.plane(0) + plane.data.size(), plane.data.begin());
        write_png16(out.note(stem + "_channel_intensity.png"), plane);
        std::copy(planes.plane(1), planes.plane(1) + plane.data.size(), plane.data.begin());
        write_png16(out.note(stem + "_channel_response.png"), plane);
        out.manifest("export_concat", image_path);
        result.summary = image_path + ": wrote intensity + response channel pair";
    } else {
        const ScalarMap up =
            upsample_bilinear(normalize_unit(diff), img.height, img.width, cfg.pooling.p);
        write_png16(out.note(stem + "_suppressed.png"), suppression_blend(img, up, cfg.detector));
        out.manifest("export_suppress", image_path);
        result.summary = image_path + ": wrote collinearity-suppressed image";
    }
    return result;
}

namespace {

CommandResult experiment_occlusion(const RunConfig& cfg) {
    CommandResult result;
    Emitter out(cfg, result);
    const CrossingScene scene = crossing_scene();
    const LongGaborComparison cmp =
        long_gabor_compare(scene.image, scene.on_mask, scene.off_mask, 55, cfg.model_params());

    out.map_artifacts("occlusion_col_map", cmp.col_map, true);
    out.map_artifacts("occlusion_long_gabor", cmp.long_gabor_map, true);
    std::string csv = "snr_col,snr_long,snr_ratio\n";
    csv += format_double(cmp.snr_col) + "," + format_double(cmp.snr_long) + "," +
           format_double(cmp.snr_ratio) + "\n";
    write_text(out.note("occlusion_snr.csv"), csv);
    out.manifest("experiment_occlusion", "");

    BandCheck band;
    band.expect(std::isfinite(cmp.snr_ratio) && cmp.snr_ratio > 1.0,
                "collinearity/long-gabor snr ratio " + format_double(cmp.snr_ratio) + " > 1");
    result.exit_code = band.pass ? 0 : 1;
    result.details = band.lines;
    result.summary = std::string(band.pass ? "PASS" : "FAIL") + " occlusion: snr ratio " +
                     format_double(cmp.snr_ratio);
    return result;
}

CommandResult experiment_basic(const RunConfig& cfg, const ExperimentConfig& ecfg) {
    CommandResult result;
    Emitter out(cfg, result);
    const BasicComparison cmp = run_basic_comparison(ecfg);
    std::string csv = "condition,response,control,ratio\n";
    csv += "collinear," + format_double(cmp.collinear) + "," + format_double(cmp.collinear_control) +
           "," + format_double(cmp.collinear / cmp.collinear_control) + "\n";
    csv += "orthogonal," + format_double(cmp.orthogonal) + "," +
           format_double(cmp.orthogonal_control) + "," +
           format_double(cmp.orthogonal / cmp.orthogonal_control) + "\n";
    write_text(out.note("basic_comparison.csv"), csv);
    out.manifest("experiment_basic", "");

    BandCheck band;
    const double col = cmp.collinear / cmp.collinear_control;
    const double orth = cmp.orthogonal / cmp.orthogonal_control;
    band.expect(col > 1.05, "collinear facilitation " + format_double(col) + " > 1.05");
    band.expect(std::abs(orth - 1.0) <= 1e-3,
                "orthogonal facilitation " + format_double(orth) + " within 1e-3 of 1");
    result.exit_code = band.pass ? 0 : 1;
    result.details = band.lines;
    result.summary = std::string(band.pass ? "PASS" : "FAIL") + " basic: collinear " +
                     format_double(col) + ", orthogonal " + format_double(orth);
    return result;
}

CommandResult experiment_sweep(const std::string& name, const RunConfig& cfg,
                               const ExperimentConfig& ecfg) {
    CommandResult result;
    Emitter out(cfg, result);
    SweepResult sweep;
    BandCheck band;
    std::string headline;

    if (name == "contrast-gap") {
        sweep = contrast_sweep_gap({0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}, ecfg);
        double mean = 0.0, var = 0.0;
        for (size_t i = 0; i < sweep.values.size(); ++i) mean += ratio_at(sweep, i);
        mean /= static_cast<double>(sweep.values.size());
        for (size_t i = 0; i < sweep.values.size(); ++i) {
            const double d = ratio_at(sweep, i) - mean;
            var += d * d;
        }
        const double cv = std::sqrt(var / static_cast<double>(sweep.values.size())) / mean;
        band.expect(cv < 0.05, "facilitation ratio spread " + format_double(cv) + " < 0.05");
        headline = "ratio spread " + format_double(cv);
    } else if (name == "contrast-line") {
        sweep = contrast_sweep_line({0.1, 0.3, 0.5, 0.7, 0.9}, ecfg);
        const double growth = ratio_at(sweep, sweep.values.size() - 1) / ratio_at(sweep, 0);
        band.expect(growth >= 1.05,
                    "ratio growth over contrast " + format_double(growth) + " >= 1.05");
        headline = "ratio growth " + format_double(growth);
    } else if (name == "length") {
        std::vector<int> grid;
        for (int len = 20; len <= 280; len += 20) grid.push_back(len);
        sweep = length_sweep(grid, ecfg);
        bool mono = true;
        size_t knee = 1;
        double biggest = -1.0;
        for (size_t i = 1; i < sweep.response.size(); ++i) {
            mono = mono && sweep.response[i] >= sweep.response[i - 1] - 1e-9;
            const double inc = sweep.response[i] - sweep.response[i - 1];
            if (inc > biggest) {
                biggest = inc;
                knee = i;
            }
        }
        const double sat = sweep.response[9] / sweep.response[13];  // 200 px vs 280 px
        band.expect(mono, "response monotone nondecreasing in length");
        band.expect(sweep.values[knee] < 140.0,
                    "largest increment at " + format_double(sweep.values[knee]) + " px < 140");
        band.expect(sat > 0.95, "saturation response(200)/response(280) " + format_double(sat) +
                                    " > 0.95");
        headline = "knee " + format_double(sweep.values[knee]) + " px, saturation " +
                   format_double(sat);
    } else if (name == "flanker-distance") {
        std::vector<int> grid;
        for (int d = 2; d <= 16; ++d) grid.push_back(d);
        sweep = flanker_distance_sweep(grid, ecfg);
        auto at_d = [&](int d) { return ratio_at(sweep, static_cast<size_t>(d - 2)); };
        for (int d : {6, 8, 10})
            band.expect(at_d(d) > 1.05, "facilitation at " + std::to_string(d) + " lambda " +
                                            format_double(at_d(d)) + " > 1.05");
        for (int d : {2, 4, 16})
            band.expect(at_d(d) < 1.01, "facilitation at " + std::to_string(d) + " lambda " +
                                            format_double(at_d(d)) + " < 1.01");
        headline = "band ratios " + format_double(at_d(6)) + " / " + format_double(at_d(8)) +
                   " / " + format_double(at_d(10));
    } else {  // rotation
        std::vector<double> grid;
        for (int deg = -90; deg <= 90; deg += 5) grid.push_back(deg);
        sweep = rotation_tuning(grid, ecfg);
        const size_t zero = 18;  // index of 0 degrees
        double peak = 0.0;
        size_t peak_i = 0;
        for (size_t i = 0; i < sweep.normalized.size(); ++i) {
            if (sweep.normalized[i] > peak) {
                peak = sweep.normalized[i];
                peak_i = i;
            }
        }
        band.expect(peak_i == zero, "tuning peak at 0 degrees");
        bool unimodal = true;
        for (size_t i = zero; i + 1 < sweep.normalized.size(); ++i)
            unimodal = unimodal && sweep.normalized[i + 1] <= sweep.normalized[i] + 5e-3;
        for (size_t i = zero; i > 0; --i)
            unimodal = unimodal && sweep.normalized[i - 1] <= sweep.normalized[i] + 5e-3;
        band.expect(unimodal, "tuning curve unimodal");
        double asym = 0.0;
        for (size_t k = 1; k <= zero; ++k)
            asym = std::max(asym, std::abs(sweep.normalized[zero + k] - sweep.normalized[zero - k]));
        band.expect(asym <= 0.02, "mirror asymmetry " + format_double(asym) + " <= 0.02");
        double cross = -1.0;
        for (size_t i = zero; i + 1 < sweep.normalized.size(); ++i) {
            if (sweep.normalized[i] >= 0.5 && sweep.normalized[i + 1] < 0.5) {
                const double frac = (sweep.normalized[i] - 0.5) /
                                    (sweep.normalized[i] - sweep.normalized[i + 1]);
                cross = sweep.values[i] + frac * (sweep.values[i + 1] - sweep.values[i]);
                break;
            }
        }
        band.expect(cross >= 5.0 && cross <= 30.0,
                    "half-maximum crossing " + format_double(cross) + " deg in [5, 30]");
        headline = "half-max " + format_double(cross) + " deg";
    }

    const std::string prefix = [&] {
        std::string p = name;
        std::replace(p.begin(), p.end(), '-', '_');
        return p;
    }();
    write_sweep_csv(out.note(prefix + "_sweep.csv"), sweep);
    if (!sweep.profiles.empty()) write_profiles_csv(out.note(prefix + "_profiles.csv"), sweep);
    out.manifest("experiment_" + prefix, "");

    result.exit_code = band.pass ? 0 : 1;
    result.details = band.lines;
    result.summary = std::string(band.pass ? "PASS" : "FAIL") + " " + name + ": " + headline;
    return result;
}

}  // namespace

CommandResult cmd_experiment(const std::string& name, const RunConfig& cfg) {
    const auto names = experiment_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) {
        std::string valid;
        for (const std::string& n : names) valid += (valid.empty() ? "" : ", ") + n;
        throw std::invalid_argument("unknown experiment '" + name + "' (valid: " + valid + ")");
    }
    if (name == "occlusion") return experiment_occlusion(cfg);
    ExperimentConfig ecfg;
    ecfg.model = cfg.model_params();
    if (name == "basic") return experiment_basic(cfg, ecfg);
    return experiment_sweep(name, cfg, ecfg);
}

CommandResult cmd_kernels(const RunConfig& cfg) {
    CommandResult result;
    Emitter out(cfg, result);
    const GaborBank bank = build_gabor_bank(cfg.gabor);
    const ModelParams params = cfg.model_params();
    const CollinearityKernelSet kernels = pipeline_kernels(params, bank);

    for (size_t l = 0; l < bank.kernels.size(); ++l) {
        GrayImage k(bank.kernel_size, bank.kernel_size);
        k.data = bank.kernels[l];
        write_csv(out.note("gabor_kernel_" + std::to_string(l) + ".csv"), k);
    }
    for (size_t l = 0; l < kernels.kernels.size(); ++l) {
        GrayImage k(kernels.side, kernels.side);
        k.data = kernels.kernels[l];
        write_csv(out.note("collinearity_kernel_" + std::to_string(l) + ".csv"), k);
    }
    out.manifest("kernels", "");
    result.summary = "wrote " + std::to_string(bank.kernels.size()) + " gabor and " +
                     std::to_string(kernels.kernels.size()) + " collinearity kernel matrices";
    return result;
}

}  // namespace colvis
