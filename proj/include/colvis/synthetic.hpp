#pragma once

#include <random>
#include <utility>
#include <vector>

#include "colvis/core.hpp"

// Deterministic synthetic inspection scenes with known ground truth, used by
// the ablation command and the verification suite.
namespace colvis {

// Portable uniform doubles: two 32-bit twister words -> 53-bit mantissa.
// std::uniform_real_distribution is not bit-stable across standard libraries.
class SpeckleRng {
  public:
    explicit SpeckleRng(unsigned seed) : gen_(seed) {}
    double uniform(double lo, double hi) {
        const double a = static_cast<double>(gen_() >> 5);   // 27 bits
        const double b = static_cast<double>(gen_() >> 6);   // 26 bits
        const double u = (a * 67108864.0 + b) / 9007199254740992.0;
        return lo + u * (hi - lo);
    }

  private:
    std::mt19937 gen_;
};

// Paints every pixel within thickness/2 of the segment (r0,c0)-(r1,c1).
void draw_segment(GrayImage& img, double r0, double c0, double r1, double c1, double value,
                  double thickness = 3.0);

// Wafer street grid with a circular-arc cut crossing the middle street
// almost perpendicularly.
struct WaferScene {
    GrayImage image;
    std::vector<int> street_rows;
    std::vector<unsigned char> arc_mask;  // row-major, image resolution
};

WaferScene wafer_scene();

// Pixel labels on the pooled grid: arc pixels (fault class) and street
// pixels (good class), both pruned near borders and crossings so each label
// is unambiguous.
struct WaferLabels {
    int height = 0;
    int width = 0;
    std::vector<unsigned char> fault;
    std::vector<unsigned char> street;
};

WaferLabels wafer_labels(const WaferScene& scene, int pool_stride);

// Fiber mat: long collinear fibers, two short bright fragments anchoring the
// intensity range, three clumps of random texture.
struct FiberScene {
    GrayImage image;
    std::vector<std::pair<int, int>> clump_centers;  // image resolution
};

FiberScene fiber_scene();

// Two crossing lines in speckle, with on-line / off-line evaluation masks.
struct CrossingScene {
    GrayImage image;
    ScalarMap on_mask;
    ScalarMap off_mask;
};

CrossingScene crossing_scene();

}  // namespace colvis
