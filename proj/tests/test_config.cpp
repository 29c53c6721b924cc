#include "chemotaxis/config.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

using namespace chemotaxis;

TEST_CASE("presets carry their model constants")
{
    for (const std::string& name : preset_names()) {
        const ExperimentConfig c = preset(name);
        CHECK(c.preset == name);
        CHECK_NOTHROW(c.validate());
        CHECK(c.dx() == doctest::Approx(0.01));
    }
    const ExperimentConfig unit = preset("unit-box");
    CHECK(unit.params.chi == 50.0);
    CHECK(unit.length == 1.0);
    CHECK(unit.t_end == 300.0);
    const ExperimentConfig wide = preset("wide-box");
    CHECK(wide.params.D == 0.1);
    CHECK(wide.params.a == 20.0);
    CHECK(wide.params.b == 10.0);
    CHECK(wide.rho_mean == 1.5);
    CHECK(wide.length == 3.0);
    const ExperimentConfig meta = preset("metastable");
    CHECK(meta.params.gamma == 3.0);
    CHECK(meta.t_end == 400.0);
    const ExperimentConfig two = preset("two-bumps");
    CHECK(two.initial == InitialKind::TwoBumps);
    CHECK(two.mass_left == 1.0);
    CHECK(two.mass_right == 3.0);
    CHECK(two.length == 4.0);
    CHECK_THROWS_AS(preset("nope"), ConfigError);
}

TEST_CASE("parse_config reads keys, comments and blank lines")
{
    const ExperimentConfig c = parse_config("# header\n"
                                            "\n"
                                            "model = parabolic   # trailing\n"
                                            "gamma = 3\n"
                                            "chi=7.5\n"
                                            "flux = hll-roe\n"
                                            "reconstruction = E\n"
                                            "damping = explicit\n"
                                            "initial = central-bump\n"
                                            "execution = serial\n"
                                            "t_end = 2.5\n");
    CHECK(c.model == ModelKind::Parabolic);
    CHECK(c.params.gamma == 3.0);
    CHECK(c.params.chi == 7.5);
    CHECK(c.scheme.flux.type == FluxType::HLLRoe);
    CHECK(c.scheme.reconstruction == ReconstructionKind::E);
    CHECK(c.scheme.damping == DampingMode::ExplicitInReconstruction);
    CHECK(c.initial == InitialKind::CentralBump);
    CHECK(c.execution == Execution::Serial);
    CHECK(c.t_end == 2.5);
}

TEST_CASE("dx is applied after length and must divide it")
{
    const ExperimentConfig c = parse_config("dx = 0.05\nlength = 2\n");
    CHECK(c.length == 2.0);
    CHECK(c.cells == 40);
    CHECK_THROWS_AS(parse_config("length = 1\ndx = 0.3\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("dx = -1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("dx = 0.5\n"), ConfigError);
}

TEST_CASE("preset key applies first and overrides follow")
{
    const ExperimentConfig c = parse_config("chi = 3\npreset = wide-box\ndx = 0.02\n");
    CHECK(c.preset == "wide-box");
    CHECK(c.params.chi == 3.0);
    CHECK(c.params.D == 0.1);
    CHECK(c.cells == 150);
    ExperimentConfig d = preset("unit-box");
    CHECK_THROWS_AS(apply_setting(d, "preset", "wide-box"), ConfigError);
}

TEST_CASE("malformed configurations are rejected")
{
    CHECK_THROWS_AS(parse_config("colour = red\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("chi = 1\nchi = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("preset = unit-box\npreset = wide-box\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("chi\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("= 3\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("chi =\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("chi = abc\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("chi = nan\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("cells = 2.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("cells = 3\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("model = kinetic\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("flux = roe\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("initial = triangle\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("preset = none\n"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/file.cfg"), ConfigError);
    try {
        parse_config("chi = 1\n\nbogus = 2\n", "run.cfg");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("run.cfg:3") != std::string::npos);
    }
}

TEST_CASE("validate rejects inconsistent values")
{
    auto invalid = [](auto&& edit) {
        ExperimentConfig c;
        edit(c);
        CHECK_THROWS_AS(c.validate(), ConfigError);
    };
    invalid([](ExperimentConfig& c) { c.t_end = 0.0; });
    invalid([](ExperimentConfig& c) { c.beta = 1.0; });
    invalid([](ExperimentConfig& c) { c.safety = 0.0; });
    invalid([](ExperimentConfig& c) { c.scheme.cfl_factor = 1.5; });
    invalid([](ExperimentConfig& c) { c.bump_threshold = 0.0; });
    invalid([](ExperimentConfig& c) { c.rho_mean = -1.0; });
    invalid([](ExperimentConfig& c) { c.params.gamma = 1.0; });
    invalid([](ExperimentConfig& c) {
        c.initial = InitialKind::TwoBumps;
        c.bump_length = 0.6;
    });
}

TEST_CASE("config entries round-trip through the parser")
{
    for (const std::string& name : preset_names()) {
        ExperimentConfig c = preset(name);
        c.params.chi = 0.1 + 0.2;
        c.beta = 0.9;
        c.scheme.flux.type = FluxType::HLL;
        const ExperimentConfig back = parse_config(format_config(c));
        CHECK(config_entries(back) == config_entries(c));
        CHECK(back.params.chi == c.params.chi);
    }
    const std::string path = "test_config_roundtrip.cfg";
    {
        std::ofstream os(path);
        os << format_config(preset("metastable"));
    }
    CHECK(config_entries(load_config(path)) == config_entries(preset("metastable")));
    std::remove(path.c_str());
}
