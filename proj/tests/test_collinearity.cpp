#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "colvis/collinearity.hpp"
#include "colvis/reference.hpp"

using namespace colvis;

namespace {

std::vector<double> eight_orientations() {
    std::vector<double> t;
    for (int i = 0; i < 8; ++i) t.push_back(i * 0.25 * std::numbers::pi);
    return t;
}

CollinearityKernelConfig band5() {
    CollinearityKernelConfig cfg;
    cfg.lambda = 5.0;
    return cfg;
}

FeatureStack random_stack(int h, int w, int l, unsigned seed, double scale = 1.0) {
    FeatureStack s(h, w, l);
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> u(0.0, scale);
    for (auto& v : s.data) v = u(gen);
    return s;
}

}  // namespace

TEST_CASE("band geometry at lambda 5: side, annulus, plateau, ramp") {
    auto set = build_collinearity_kernels(band5(), eight_orientations());
    REQUIRE(set.kernels.size() == 8);
    CHECK(set.side == 141);  // 2*ceil(14*5)+1

    const int R = 70;
    for (size_t l = 0; l < set.kernels.size(); ++l) {
        const double theta = set.thetas[l];
        const double ct = std::cos(theta), st = std::sin(theta);
        const auto& k = set.kernels[l];
        double sum = 0.0;
        int nonzero = 0;
        for (int dr = -R; dr <= R; ++dr)
            for (int dc = -R; dc <= R; ++dc) {
                const double w = k[(dr + R) * set.side + (dc + R)];
                sum += w;
                if (w == 0.0) continue;
                ++nonzero;
                const double along = std::abs(-dr * st + dc * ct);
                const double across = std::abs(dr * ct + dc * st);
                CHECK(w > 0.0);
                CHECK(across <= 5.0 + 1e-9);
                CHECK(along >= 25.0 - 1e-9);
                CHECK(along < 70.0);
            }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(nonzero > 100);
        CHECK(k[R * set.side + R] == 0.0);
    }
}

TEST_CASE("the band runs along the line axis, not the carrier axis") {
    auto set = build_collinearity_kernels(band5(), {0.0});
    const int R = 70;
    const auto& k = set.kernels[0];
    // 0 orientation = horizontal structure: support sits at small |dr|,
    // large |dc|
    CHECK(k[(0 + R) * set.side + (30 + R)] > 0.0);
    CHECK(k[(0 + R) * set.side + (-30 + R)] > 0.0);
    CHECK(k[(30 + R) * set.side + (0 + R)] == 0.0);
    CHECK(k[(-30 + R) * set.side + (0 + R)] == 0.0);
}

TEST_CASE("plateau is flat and the tail ramps linearly to zero") {
    auto set = build_collinearity_kernels(band5(), {0.0});
    const int R = 70;
    const auto& k = set.kernels[0];
    auto w = [&](int dr, int dc) { return k[(dr + R) * set.side + (dc + R)]; };
    CHECK(w(0, 30) == doctest::Approx(w(0, 45)).epsilon(1e-12));   // inside plateau [25,50]
    CHECK(w(0, 25) == doctest::Approx(w(0, 50)).epsilon(1e-12));   // band edges inclusive
    CHECK(w(0, 55) == doctest::Approx(0.75 * w(0, 30)).epsilon(1e-12));  // (70-55)/20
    CHECK(w(0, 65) == doctest::Approx(0.25 * w(0, 30)).epsilon(1e-12));
    CHECK(w(0, 70) == 0.0);
    CHECK(w(0, 24) == 0.0);
}

TEST_CASE("kernels are symmetric under half-turn rotation") {
    auto set = build_collinearity_kernels(band5(), eight_orientations());
    const int R = (set.side - 1) / 2;
    for (const auto& k : set.kernels)
        for (int dr = -R; dr <= R; ++dr)
            for (int dc = -R; dc <= R; ++dc)
                CHECK(k[(dr + R) * set.side + (dc + R)] ==
                      k[(-dr + R) * set.side + (-dc + R)]);
}

TEST_CASE("sparse tap list mirrors the dense matrix") {
    auto set = build_collinearity_kernels(band5(), eight_orientations());
    const int R = (set.side - 1) / 2;
    for (size_t l = 0; l < set.kernels.size(); ++l) {
        double tap_sum = 0.0;
        for (const auto& t : set.taps[l]) {
            CHECK(t.w == set.kernels[l][(t.dr + R) * set.side + (t.dc + R)]);
            tap_sum += t.w;
        }
        size_t dense_nonzero = 0;
        for (double v : set.kernels[l]) dense_nonzero += v != 0.0;
        CHECK(set.taps[l].size() == dense_nonzero);
        CHECK(tap_sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("influence convolution matches the dense zero-padded oracle") {
    CollinearityKernelConfig cfg = band5();
    cfg.lambda = 1.0;  // small kernel so borders dominate
    auto set = build_collinearity_kernels(cfg, eight_orientations());
    for (unsigned seed : {21u, 22u}) {
        FeatureStack r = random_stack(24, 32, 8, seed);
        FeatureStack fast = collinearity_influence(r, set);
        FeatureStack slow = ref::collinearity_influence(r, set);
        for (size_t i = 0; i < fast.data.size(); ++i)
            CHECK(std::abs(fast.data[i] - slow.data[i]) < 1e-10);
    }
}

TEST_CASE("a unit spike spreads its kernel, flipped") {
    CollinearityKernelConfig cfg = band5();
    cfg.lambda = 1.0;
    auto set = build_collinearity_kernels(cfg, {0.25 * std::numbers::pi});
    const int R = (set.side - 1) / 2;
    FeatureStack r(31, 31, 1, 0.0);
    r.at(15, 15, 0) = 1.0;
    FeatureStack out = collinearity_influence(r, set);
    for (int dr = -R; dr <= R; ++dr)
        for (int dc = -R; dc <= R; ++dc)
            CHECK(out.at(15 + dr, 15 + dc, 0) ==
                  doctest::Approx(set.kernels[0][(-dr + R) * set.side + (-dc + R)])
                      .epsilon(1e-12));
}

TEST_CASE("rate dynamics settle onto the fixed point") {
    CollinearityKernelConfig cfg = band5();
    cfg.lambda = 1.5;
    auto set = build_collinearity_kernels(cfg, eight_orientations());
    DynamicsConfig dyn;
    FeatureStack pooled = random_stack(20, 26, 8, 31, 0.3);

    CollinearityResult euler = collinearity_layer(pooled, set, dyn);
    CHECK(euler.residual < dyn.epsilon);

    // residual really is the fixed-point gap of the returned rates
    FeatureStack infl = collinearity_influence(euler.rates, set);
    double gap = 0.0;
    for (size_t i = 0; i < pooled.data.size(); ++i) {
        const double t = pooled.data[i] * (1.0 + dyn.w_col * infl.data[i]);
        gap = std::max(gap, std::abs(t - euler.rates.data[i]));
    }
    CHECK(gap == doctest::Approx(euler.residual).epsilon(1e-9));

    CollinearityResult picard = ref::collinearity_picard(pooled, set, dyn);
    for (size_t i = 0; i < euler.rates.data.size(); ++i)
        CHECK(std::abs(euler.rates.data[i] - picard.rates.data[i]) < 1e-3);
}

TEST_CASE("zero drive converges immediately to zero") {
    auto set = build_collinearity_kernels(band5(), eight_orientations());
    FeatureStack pooled(12, 12, 8, 0.0);
    CollinearityResult res = collinearity_layer(pooled, set, DynamicsConfig{});
    CHECK(res.steps == 0);
    CHECK(res.residual == 0.0);
    for (double v : res.rates.data) CHECK(v == 0.0);
}

TEST_CASE("facilitation never reduces rates below the drive") {
    // nonnegative kernel and positive w: fixed point >= pooled
    CollinearityKernelConfig cfg = band5();
    cfg.lambda = 1.0;
    auto set = build_collinearity_kernels(cfg, eight_orientations());
    FeatureStack pooled = random_stack(16, 16, 8, 41, 0.2);
    CollinearityResult res = collinearity_layer(pooled, set, DynamicsConfig{});
    for (size_t i = 0; i < pooled.data.size(); ++i)
        CHECK(res.rates.data[i] >= pooled.data[i] - 1e-9);
}

TEST_CASE("non-convergence raises instead of returning junk") {
    CollinearityKernelConfig cfg = band5();
    cfg.lambda = 1.0;
    auto set = build_collinearity_kernels(cfg, eight_orientations());
    FeatureStack pooled = random_stack(16, 16, 8, 51, 0.5);
    DynamicsConfig dyn;
    dyn.max_steps = 1;
    CHECK_THROWS_AS(collinearity_layer(pooled, set, dyn), std::runtime_error);
}

TEST_CASE("config validation") {
    auto thetas = eight_orientations();
    CollinearityKernelConfig bad = band5();
    bad.inner_start = 11.0;  // above plateau_end
    CHECK_THROWS_AS(build_collinearity_kernels(bad, thetas), std::invalid_argument);
    bad = band5();
    bad.lambda = 0.0;
    CHECK_THROWS_AS(build_collinearity_kernels(bad, thetas), std::invalid_argument);

    auto set = build_collinearity_kernels(band5(), thetas);
    FeatureStack pooled(8, 8, 8, 0.0);
    DynamicsConfig dyn;
    dyn.dt_ms = 20.0;  // above tau
    CHECK_THROWS_AS(collinearity_layer(pooled, set, dyn), std::invalid_argument);

    FeatureStack wrong(8, 8, 3, 0.0);
    CHECK_THROWS_AS(collinearity_influence(wrong, set), std::invalid_argument);
}
