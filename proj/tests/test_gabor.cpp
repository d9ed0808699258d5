#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "colvis/gabor.hpp"
#include "colvis/reference.hpp"

using namespace colvis;

namespace {

GrayImage random_image(int h, int w, unsigned seed) {
    GrayImage img(h, w);
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& v : img.data) v = u(gen);
    return img;
}

}  // namespace

TEST_CASE("wavelength calibration from kernel size") {
    CHECK(lambda_from_kernel(11) == 5);
    CHECK(lambda_from_kernel(3) == 1);   // floor at 1
    CHECK(lambda_from_kernel(5) == 2);
    CHECK(lambda_from_kernel(7) == 3);
    CHECK(lambda_from_kernel(23) == 10);
    CHECK(lambda_from_kernel(55) == 25);
    CHECK_THROWS_AS(lambda_from_kernel(1), std::invalid_argument);
}

TEST_CASE("default parameter resolution") {
    GaborConfig cfg;
    CHECK(cfg.resolved_frequency() == doctest::Approx(0.2));
    CHECK(cfg.resolved_sigma1() == doctest::Approx(4.4));
    CHECK(cfg.resolved_sigma2() == doctest::Approx(4.4));
    auto thetas = cfg.resolved_orientations();
    REQUIRE(thetas.size() == 8);
    CHECK(thetas[1] == doctest::Approx(0.25 * std::numbers::pi));
    CHECK(thetas[7] == doctest::Approx(1.75 * std::numbers::pi));
    cfg.frequency = 0.5;
    cfg.sigma1 = 2.0;
    CHECK(cfg.resolved_frequency() == doctest::Approx(0.5));
    CHECK(cfg.resolved_sigma1() == doctest::Approx(2.0));
    CHECK(cfg.resolved_sigma2() == doctest::Approx(4.4));
}

TEST_CASE("kernels are zero-mean with unit positive mass") {
    GaborConfig cfg;
    for (double theta : cfg.resolved_orientations()) {
        auto k = build_gabor_kernel(cfg, theta);
        REQUIRE(k.size() == 121);
        double sum = 0.0, pos = 0.0;
        for (double v : k) {
            sum += v;
            if (v > 0) pos += v;
        }
        CHECK(std::abs(sum) < 1e-12);
        CHECK(pos == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("opposite orientations share one kernel at zero phase") {
    GaborConfig cfg;
    auto a = build_gabor_kernel(cfg, 0.25 * std::numbers::pi);
    auto b = build_gabor_kernel(cfg, 1.25 * std::numbers::pi);
    for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
}

TEST_CASE("quarter-turn rotation maps the 0 kernel onto the pi/2 kernel") {
    GaborConfig cfg;
    const int K = cfg.kernel_size;
    auto k0 = build_gabor_kernel(cfg, 0.0);
    auto k90 = build_gabor_kernel(cfg, 0.5 * std::numbers::pi);
    for (int r = 0; r < K; ++r)
        for (int c = 0; c < K; ++c)
            CHECK(k90[r * K + c] ==
                  doctest::Approx(k0[c * K + (K - 1 - r)]).epsilon(1e-12));
}

TEST_CASE("fold_symmetric keeps the first half of an even bank") {
    GaborConfig cfg;
    cfg.fold_symmetric = true;
    GaborBank folded = build_gabor_bank(cfg);
    REQUIRE(folded.kernels.size() == 4);
    GaborBank full = build_gabor_bank(GaborConfig{});
    for (int l = 0; l < 4; ++l)
        for (size_t i = 0; i < folded.kernels[l].size(); ++i)
            CHECK(folded.kernels[l][i] == full.kernels[l][i]);
}

TEST_CASE("constant images produce zero response everywhere") {
    // replicate padding + zero-mean kernels: flat input cancels exactly,
    // including at borders and corners
    GaborBank bank = build_gabor_bank(GaborConfig{});
    GrayImage img(17, 23, 0.63);
    FeatureStack out = gabor_layer(img, bank);
    for (double v : out.data) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("responses are half-rectified") {
    GaborBank bank = build_gabor_bank(GaborConfig{});
    FeatureStack out = gabor_layer(random_image(20, 20, 7), bank);
    for (double v : out.data) CHECK(v >= 0.0);
}

TEST_CASE("a horizontal line drives the 0-degree plane hardest") {
    GaborBank bank = build_gabor_bank(GaborConfig{});
    GrayImage img(31, 31, 0.0);
    for (int c = 0; c < 31; ++c) img.at(15, c) = 1.0;
    FeatureStack out = gabor_layer(img, bank);
    const double r0 = out.at(15, 15, 0);
    CHECK(r0 > 0.0);
    for (int l = 1; l < 8; ++l)
        if (l != 4)  // theta + pi duplicates plane 0
            CHECK(r0 > out.at(15, 15, l));
    CHECK(out.at(15, 15, 4) == doctest::Approx(r0).epsilon(1e-12));
}

TEST_CASE("a vertical line drives the 90-degree plane hardest") {
    GaborBank bank = build_gabor_bank(GaborConfig{});
    GrayImage img(31, 31, 0.0);
    for (int r = 0; r < 31; ++r) img.at(r, 15) = 1.0;
    FeatureStack out = gabor_layer(img, bank);
    const double r90 = out.at(15, 15, 2);
    CHECK(r90 > 0.0);
    for (int l = 0; l < 8; ++l)
        if (l != 2 && l != 6)
            CHECK(r90 > out.at(15, 15, l));
}

TEST_CASE("optimized layer matches the dense serial oracle") {
    GaborBank bank = build_gabor_bank(GaborConfig{});
    for (unsigned seed : {1u, 2u, 3u}) {
        GrayImage img = random_image(16 + 3 * seed, 29, seed);
        FeatureStack fast = gabor_layer(img, bank);
        FeatureStack slow = ref::gabor_layer(img, bank);
        REQUIRE(fast.data.size() == slow.data.size());
        for (size_t i = 0; i < fast.data.size(); ++i)
            CHECK(std::abs(fast.data[i] - slow.data[i]) < 1e-10);
    }
}

TEST_CASE("kernel construction rejects bad sizes") {
    CHECK_THROWS_AS(gabor_waveform(4, 0.0, 0.2, 4.4, 4.4, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(gabor_waveform(1, 0.0, 0.2, 4.4, 4.4, 0.0), std::invalid_argument);
}
