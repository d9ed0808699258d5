#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "colvis/pooling.hpp"
#include "colvis/reference.hpp"

using namespace colvis;

namespace {

FeatureStack random_stack(int h, int w, int l, unsigned seed) {
    FeatureStack s(h, w, l);
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& v : s.data) v = u(gen);
    return s;
}

}  // namespace

TEST_CASE("window taps: unit sum, symmetric, zero at stride multiples") {
    for (int p : {2, 3, 4}) {
        auto k = lanczos3_kernel(p);
        REQUIRE(static_cast<int>(k.size()) == 6 * p - 1);
        double sum = 0.0;
        for (double v : k) sum += v;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        const int center = 3 * p - 1;
        for (int i = 0; i < center; ++i)
            CHECK(k[i] == doctest::Approx(k[2 * center - i]).epsilon(1e-12));
        // sinc zeros: taps at nonzero multiples of p vanish
        for (int m = 1; m < 3; ++m) {
            CHECK(std::abs(k[center + m * p]) < 1e-12);
            CHECK(std::abs(k[center - m * p]) < 1e-12);
        }
    }
}

TEST_CASE("stride 1 pooling is the identity") {
    FeatureStack s = random_stack(9, 13, 2, 3);
    FeatureStack out = pool(s, PoolingConfig{1});
    REQUIRE(out.data.size() == s.data.size());
    for (size_t i = 0; i < s.data.size(); ++i)
        CHECK(out.data[i] == doctest::Approx(s.data[i]).epsilon(1e-12));
}

TEST_CASE("output dims floor the input over the stride") {
    PoolingConfig cfg{3};
    FeatureStack out = pool(random_stack(32, 17, 2, 5), cfg);
    CHECK(out.height == 10);
    CHECK(out.width == 5);
    CHECK(out.orientations == 2);
    FeatureStack big(1540, 229, 1);
    FeatureStack pooled = pool(big, cfg);
    CHECK(pooled.height == 513);
    CHECK(pooled.width == 76);
}

TEST_CASE("a constant field pools to itself") {
    FeatureStack s(14, 14, 1, 0.8);
    FeatureStack out = pool(s, PoolingConfig{3});
    for (double v : out.data) CHECK(v == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("output pixels center on input j*p + (p-1)/2") {
    // a symmetric window reproduces linear ramps exactly at its center,
    // away from the borders
    const int p = 3;
    GrayImage ramp(30, 30);
    for (int r = 0; r < 30; ++r)
        for (int c = 0; c < 30; ++c) ramp.at(r, c) = 0.01 * r + 0.002 * c;
    ScalarMap out = pool_image(ramp, PoolingConfig{p});
    for (int r = 3; r < out.height - 3; ++r)
        for (int c = 3; c < out.width - 3; ++c)
            CHECK(out.at(r, c) ==
                  doctest::Approx(0.01 * (r * p + 1) + 0.002 * (c * p + 1)).epsilon(1e-9));
}

TEST_CASE("a delta lands on its registered output pixel") {
    const int p = 3;
    GrayImage img(30, 30, 0.0);
    img.at(13, 22) = 1.0;  // = 4*3+1, 7*3+1
    ScalarMap out = pool_image(img, PoolingConfig{p});
    int br = 0, bc = 0;
    double best = -1.0;
    for (int r = 0; r < out.height; ++r)
        for (int c = 0; c < out.width; ++c)
            if (out.at(r, c) > best) {
                best = out.at(r, c);
                br = r;
                bc = c;
            }
    CHECK(br == 4);
    CHECK(bc == 7);
}

TEST_CASE("ringing is clamped to zero") {
    GrayImage img(24, 24, 0.0);
    for (int r = 0; r < 24; ++r)
        for (int c = 10; c < 24; ++c) img.at(r, c) = 1.0;  // hard step rings on both sides
    ScalarMap out = pool_image(img, PoolingConfig{3});
    for (double v : out.data) CHECK(v >= 0.0);
}

TEST_CASE("separable fast path matches the direct 2D oracle") {
    for (int p : {2, 3}) {
        for (unsigned seed : {11u, 12u}) {
            FeatureStack s = random_stack(16 + p, 31, 3, seed);
            FeatureStack fast = pool(s, PoolingConfig{p});
            FeatureStack slow = ref::pool(s, PoolingConfig{p});
            REQUIRE(fast.data.size() == slow.data.size());
            for (size_t i = 0; i < fast.data.size(); ++i)
                CHECK(std::abs(fast.data[i] - slow.data[i]) < 1e-10);
        }
    }
}

TEST_CASE("pool_image agrees with a one-plane stack") {
    GrayImage img(21, 18);
    std::mt19937 gen(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& v : img.data) v = u(gen);
    FeatureStack s(21, 18, 1);
    s.data = img.data;
    ScalarMap a = pool_image(img, PoolingConfig{3});
    FeatureStack b = pool(s, PoolingConfig{3});
    for (size_t i = 0; i < a.data.size(); ++i) CHECK(a.data[i] == b.data[i]);
}

TEST_CASE("upsampling registers pooled pixels back onto image centers") {
    const int p = 3;
    ScalarMap pooled(10, 10, 0.0);
    pooled.at(4, 6) = 1.0;
    ScalarMap up = upsample_bilinear(pooled, 30, 30, p);
    int br = 0, bc = 0;
    double best = -1.0;
    for (int r = 0; r < 30; ++r)
        for (int c = 0; c < 30; ++c)
            if (up.at(r, c) > best) {
                best = up.at(r, c);
                br = r;
                bc = c;
            }
    CHECK(br == 4 * p + 1);
    CHECK(bc == 6 * p + 1);
    CHECK(best == doctest::Approx(1.0));

    ScalarMap flat(10, 10, 0.4);
    ScalarMap upf = upsample_bilinear(flat, 30, 30, p);
    for (double v : upf.data) CHECK(v == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("pooling rejects bad strides") {
    FeatureStack s(6, 6, 1, 0.1);
    CHECK_THROWS_AS(pool(s, PoolingConfig{0}), std::invalid_argument);
    CHECK_THROWS_AS(pool(s, PoolingConfig{-2}), std::invalid_argument);
    CHECK_THROWS_AS(pool(s, PoolingConfig{7}), std::invalid_argument);  // output would be empty
}
