#pragma once

#include <string>
#include <vector>

#include "colvis/core.hpp"
#include "colvis/detectors.hpp"
#include "colvis/stimuli.hpp"

namespace colvis {

// PNG (8/16-bit gray or RGB, alpha dropped) or PGM (P2/P5), chosen by magic
// bytes. Intensities scaled to [0,1]; RGB collapses via Rec. 601 luminance.
GrayImage read_image(const std::string& path);

// 16-bit grayscale PNG, v -> round(65535 * clamp(v, 0, 1)).
void write_png16(const std::string& path, const GrayImage& map);

// One CSV row per image row; shortest round-trip decimal formatting, LF
// line endings, no quoting (RFC 4180 numeric fields).
void write_csv(const std::string& path, const GrayImage& map);

void write_sweep_csv(const std::string& path, const SweepResult& sweep);

// Columns col_0..col_{n-1}, one row per profile, first column the sweep value.
void write_profiles_csv(const std::string& path, const SweepResult& sweep);

std::string roi_list_json(const RoiList& rois);

void write_text(const std::string& path, const std::string& text);

std::string sha256_file(const std::string& path);

std::string format_double(double v);

}  // namespace colvis
