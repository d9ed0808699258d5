#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <numbers>
#include <string>

#include "colvis/config.hpp"
#include "colvis/io.hpp"

using namespace colvis;

TEST_CASE("empty config materializes every default") {
    RunConfig cfg = parse_config("{}", "test");
    CHECK(cfg.gabor.kernel_size == 11);
    CHECK(cfg.gabor.resolved_orientations().size() == 8);
    CHECK(cfg.pooling.p == 3);
    CHECK(cfg.kernel.inner_start == 5.0);
    CHECK(cfg.kernel.plateau_end == 10.0);
    CHECK(cfg.kernel.outer_end == 14.0);
    CHECK(cfg.kernel.half_width == 1.0);
    CHECK(cfg.dynamics.w_col == 2.0);
    CHECK(cfg.dynamics.tau_ms == 15.0);
    CHECK(cfg.dynamics.dt_ms == 1.0);
    CHECK(cfg.dynamics.epsilon == 1e-4);
    CHECK(cfg.dynamics.max_steps == 200);
    CHECK(cfg.detector.activity_threshold == 0.5);
    CHECK(cfg.detector.ior_radius == 7);
    CHECK(cfg.io.output_dir == ".");
    CHECK(cfg.io.png);
    CHECK(cfg.io.csv);
}

TEST_CASE("a config only overrides what it names") {
    RunConfig cfg = parse_config(R"({
        "gabor": {"kernel_size": 23, "psi": 1.5707963267948966},
        "dynamics": {"epsilon": 1e-5},
        "io": {"output_dir": "out", "png": false}
    })",
                                 "test");
    CHECK(cfg.gabor.kernel_size == 23);
    CHECK(cfg.gabor.psi == doctest::Approx(std::numbers::pi / 2));
    CHECK(cfg.gabor.resolved_frequency() == doctest::Approx(0.1));  // lambda 10 from K 23
    CHECK(cfg.dynamics.epsilon == 1e-5);
    CHECK(cfg.dynamics.tau_ms == 15.0);  // untouched
    CHECK(cfg.io.output_dir == "out");
    CHECK_FALSE(cfg.io.png);
    CHECK(cfg.io.csv);
}

TEST_CASE("orientations accept a count or explicit angles") {
    RunConfig counted = parse_config(R"({"gabor": {"orientations": 4}})", "test");
    auto t = counted.gabor.resolved_orientations();
    REQUIRE(t.size() == 4);
    CHECK(t[1] == doctest::Approx(std::numbers::pi / 2));

    RunConfig listed =
        parse_config(R"({"gabor": {"orientations": [0.0, 0.5, 1.1]}})", "test");
    auto u = listed.gabor.resolved_orientations();
    REQUIRE(u.size() == 3);
    CHECK(u[2] == doctest::Approx(1.1));

    CHECK_THROWS_AS(parse_config(R"({"gabor": {"orientations": 0}})", "test"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"gabor": {"orientations": []}})", "test"), ConfigError);
}

TEST_CASE("every problem is reported in one pass") {
    try {
        parse_config(R"({
            "gabor": {"kernel_size": 8, "mystery": 1},
            "pooling": {"p": 0},
            "dynamics": {"dt_ms": 99.0},
            "nonsense": {}
        })",
                     "myfile.json");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("myfile.json") != std::string::npos);
        CHECK(msg.find("gabor.kernel_size") != std::string::npos);
        CHECK(msg.find("gabor.mystery") != std::string::npos);
        CHECK(msg.find("pooling.p") != std::string::npos);
        CHECK(msg.find("dynamics.dt_ms") != std::string::npos);
        CHECK(msg.find("nonsense") != std::string::npos);
    }
}

TEST_CASE("type errors do not abort the scan") {
    try {
        parse_config(R"({"dynamics": {"epsilon": "tiny", "max_steps": 2.5}})", "test");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("dynamics.epsilon") != std::string::npos);
        CHECK(msg.find("dynamics.max_steps") != std::string::npos);
    }
}

TEST_CASE("semantic validation guards the band geometry and thresholds") {
    CHECK_THROWS_AS(parse_config(R"({"kernel": {"plateau_end": 3.0}})", "test"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"kernel": {"outer_end": 7.0}})", "test"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"detector": {"fault_threshold": 1.5}})", "test"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"detector": {"ior_radius": 0}})", "test"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"io": {"output_dir": ""}})", "test"), ConfigError);
    CHECK_THROWS_AS(parse_config("[1,2]", "test"), ConfigError);
    CHECK_THROWS_AS(parse_config("{broken", "test"), ConfigError);
}

TEST_CASE("resolved echo round-trips through the parser") {
    RunConfig cfg = parse_config(R"({
        "gabor": {"kernel_size": 7, "orientations": 6},
        "pooling": {"p": 2},
        "kernel": {"half_width": 2.0},
        "dynamics": {"w_col": 1.5},
        "detector": {"max_rois": 8},
        "io": {"output_dir": "x"}
    })",
                                 "test");
    RunConfig back = parse_config(config_json(cfg), "echo");
    CHECK(back.gabor.kernel_size == 7);
    CHECK(back.gabor.resolved_orientations() == cfg.gabor.resolved_orientations());
    CHECK(back.pooling.p == 2);
    CHECK(back.kernel.half_width == 2.0);
    CHECK(back.dynamics.w_col == 1.5);
    CHECK(back.detector.max_rois == 8);
    CHECK(back.io.output_dir == "x");
}

TEST_CASE("config files load from disk, missing files raise") {
    namespace fs = std::filesystem;
    const fs::path path = fs::temp_directory_path() / "colvis_cfg_test.json";
    write_text(path.string(), R"({"pooling": {"p": 4}})");
    RunConfig cfg = load_config(path.string());
    CHECK(cfg.pooling.p == 4);
    std::remove(path.string().c_str());
    CHECK_THROWS_AS(load_config(path.string()), ConfigError);
}
