#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "specmux/config.hpp"
#include "specmux/error.hpp"

using namespace specmux;

namespace {

std::string config_error_path(const std::string& text)
{
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.path();
    }
    return "<no error>";
}

}  // namespace

TEST_CASE("shipped preset files match the built-in presets")
{
    for (const auto& name : preset_names()) {
        std::string const path = std::string(SPECMUX_PRESET_DIR) + "/" + name + ".json";
        REQUIRE(std::filesystem::exists(path));
        auto const loaded = load_config(path);
        CHECK(loaded.preset == name);
        CHECK(canonical_json(loaded) == canonical_json(preset_config(name)));
        std::ifstream in(path);
        std::stringstream text;
        text << in.rdbuf();
        CHECK(text.str() == canonical_json(preset_config(name)));
    }
}

TEST_CASE("canonical JSON round-trips")
{
    auto c = preset_config("soa_coupling_dense");
    c.hom.phase_model = PhaseModel::independent;
    c.source.state_b.phase_rad = 0.123456789012345678;
    c.link.modes = 17;
    c.oracle.repeater_trials = 12345;
    auto const again = parse_config(canonical_json(c));
    CHECK(canonical_json(again) == canonical_json(c));
    CHECK(config_digest(again) == config_digest(c));
}

TEST_CASE("partial configs override the preset")
{
    auto const c = parse_config(R"({"preset": "soa_coupling", "detector": {"efficiency": 0.5}})");
    CHECK(c.preset == "soa_coupling");
    CHECK(c.ssmm.peak_coupling == 0.5);
    CHECK(c.detector.efficiency == 0.5);
    CHECK(c.detector.dark_click_probability == 1e-6);

    auto const custom = parse_config(R"({"ssmm": {"adjacent_rejection_db": null, "passband_fwhm_hz": 2e9}})");
    CHECK(custom.preset == "custom");
    CHECK(!custom.ssmm.adjacent_rejection_db);
    CHECK(custom.ssmm.passband_fwhm_hz == 2e9);
}

TEST_CASE("schema violations name the field path")
{
    CHECK(config_error_path(R"({"ssmm": {"peak_couplin": 0.1}})") == "ssmm.peak_couplin");
    CHECK(config_error_path(R"({"detector": {"efficiency": "high"}})") == "detector.efficiency");
    CHECK(config_error_path(R"({"hom": {"steps": 2.5}})") == "hom.steps");
    CHECK(config_error_path(R"({"hom": {"phase_model": "random"}})") == "hom.phase_model");
    CHECK(config_error_path(R"({"keyrate": {"z_qubit": {"signal_late": true}}})") == "keyrate.z_qubit.signal_late");
    CHECK(config_error_path(R"({"bogus": 1})") == "bogus");
    CHECK(config_error_path(R"({"preset": "unknown"})") == "preset");
    CHECK(config_error_path(R"({"preset": 3})") == "preset");
    CHECK(config_error_path(R"([1, 2])") == "<root>");
    CHECK(config_error_path(R"({"ssmm": )") == "<root>");
    CHECK(config_error_path(R"({"ssmm": 5})") == "ssmm");
}

TEST_CASE("domain violations are reported per section")
{
    CHECK(config_error_path(R"({"detector": {"efficiency": 1.5}})") == "detector");
    CHECK(config_error_path(R"({"ssmm": {"peak_coupling": -0.1}})") == "ssmm");
    CHECK(config_error_path(R"({"source": {"state_a": {"signal_early": 0, "signal_late": 0}}})") == "source.state_a");
    CHECK(config_error_path(R"({"link": {"links": 0}})") == "link");
    CHECK(config_error_path(R"({"tbp": {"points": 0}})") == "tbp");
    CHECK(config_error_path(R"({"phase_scan": {"channel_2": 2}})") == "phase_scan");
    CHECK(config_error_path(R"({"keyrate": {"hom_visibility": 0.7}})") == "keyrate");
}

TEST_CASE("exceeding the spectral bandwidth is a constraint violation")
{
    CHECK_THROWS_AS(parse_config(R"({"keyrate": {"max_modes": 10}})"), ConstraintViolation);
    CHECK_THROWS_AS(parse_config(R"({"ssmm": {"mode_count": 10}})"), ConstraintViolation);
    CHECK_NOTHROW(parse_config(R"({"preset": "soa_coupling_dense"})"));
}

TEST_CASE("digest tracks every field")
{
    auto a = preset_config("current");
    auto b = a;
    CHECK(config_digest(a) == config_digest(b));
    CHECK(config_digest(a).size() == 16);
    b.hom.steps += 1;
    CHECK(config_digest(a) != config_digest(b));
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("key-rate scenarios derived from presets")
{
    for (const auto& name : scenario_preset_names()) {
        auto const from_config = scenario_config(preset_config(name));
        auto const direct = scenario_preset(name);
        CHECK(from_config.name == direct.name);
        CHECK(from_config.max_modes() == direct.max_modes());
        CHECK(from_config.ssmm.grid.spacing_hz == direct.ssmm.grid.spacing_hz);
        CHECK(from_config.ssmm.grid.center_hz == direct.ssmm.grid.center_hz);
        CHECK(from_config.ssmm.peak_coupling == direct.ssmm.peak_coupling);
        CHECK(from_config.ssmm.adjacent_rejection_db == direct.ssmm.adjacent_rejection_db);
        CHECK(from_config.ssmm.passband_fwhm_hz == direct.ssmm.passband_fwhm_hz);
        auto const a = enhancement_curve(from_config, from_config.max_modes());
        auto const b = enhancement_curve(direct, direct.max_modes());
        for (std::size_t i = 0; i < a.rows.size(); ++i) {
            CHECK(a.rows[i].rate_bits_per_s == b.rows[i].rate_bits_per_s);
        }
    }
}

TEST_CASE("interference config follows the source settings")
{
    auto c = preset_config("current");
    c.source.sideband_phase_step_rad = 0.7;
    auto const ic = interference_config(c);
    CHECK(ic.mode_count() == 2);
    CHECK(ic.pulse_b.phase_offset_rad[1] == 0.7);
    CHECK(ic.pulse_a.phase_offset_rad[1] == 0.0);
    CHECK(ic.overlap_deficit == doctest::Approx(std::sqrt(0.9)).epsilon(1e-15));
    CHECK(std::abs(ic.pulse_a.bins[kLate]) == 1.0);
}
