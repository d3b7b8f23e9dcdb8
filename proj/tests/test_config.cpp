#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "rydeo/config.hpp"
#include "rydeo/constants.hpp"
#include "rydeo/errors.hpp"

using namespace rydeo;
namespace k = rydeo::constants;

namespace {

double rel_err(double value, double reference) {
    return std::abs(value - reference) / std::abs(reference);
}

ExperimentConfig nondefault_config() {
    ExperimentConfig cfg;
    cfg.cell.temperature = 333.15;
    cfg.cell.density_override = 3376838185171791.0;
    cfg.probe.power = 1e-8;
    cfg.probe.waist = 8e-4;
    cfg.coupling.power = 0.14;
    cfg.coupling.waist = 8e-4;
    cfg.coupling.propagation_sign = -1;
    cfg.rydberg.n = 41;
    cfg.drive.e_ac = 300.0;
    cfg.numerics.mode = ResponseMode::filtered;
    cfg.numerics.gamma_eit = k::two_pi * 5e6;
    cfg.numerics.scan_span = 2.5132741228718346e8;
    cfg.numerics.lock_offset_auto = false;
    cfg.numerics.lock_offset = 1.234567890123e7;
    cfg.kerr.field_max = 320.0;
    cfg.scaling.width_exponent = 1.37;
    cfg.bandwidth.frequencies = {1e5, 3e5, 9e5, 2.7e6, 8.1e6};
    return cfg;
}

}  // namespace

TEST_CASE("minimal config: live beams and a drive validate and build") {
    ExperimentConfig cfg;
    cfg.probe.power = 1e-8;
    cfg.probe.waist = 8e-4;
    cfg.coupling.power = 0.14;
    cfg.coupling.waist = 8e-4;
    cfg.coupling.propagation_sign = -1;
    cfg.drive.e_ac = 250.0;
    CHECK_NOTHROW(cfg.validate());

    // Beams and drive are the only fields without workable defaults.
    ExperimentConfig dark;
    CHECK_THROWS_AS(dark.validate(), ValidationError);

    const ModelContext ctx = build_context(cfg);
    CHECK(ctx.geometry == BeamGeometry::counter_propagating);
    CHECK(rel_err(ctx.omega_c, 21952129.301463731) < 1e-12);
    CHECK(rel_err(ctx.omega_p, 930405.3437874798) < 1e-12);
    CHECK(ctx.density == vapor_number_density(cfg.cell));
    CHECK(ctx.level.n_star == doctest::Approx(28.87).epsilon(1e-14));
}

TEST_CASE("canonical text reparses to the identical canonical text") {
    const ExperimentConfig cfg = nondefault_config();
    const std::string text = canonical_config_text(cfg);
    const ExperimentConfig back = parse_config_text(text);
    CHECK(canonical_config_text(back) == text);
}

TEST_CASE("doubles survive the text round trip bit for bit") {
    ExperimentConfig cfg = nondefault_config();
    for (double v : {1.0 / 3.0, 0.1, 942.4778, 2.5132741228718346e8,
                     2.2250738585072014e-308, 1.7976931348623157e308}) {
        cfg.numerics.lock_offset = v;
        const ExperimentConfig back =
            parse_config_text(canonical_config_text(cfg));
        CHECK(back.numerics.lock_offset == v);
    }
    // Subnormals underflow in strtod and are refused rather than degraded.
    cfg.numerics.lock_offset = 6.9532e-310;
    CHECK_THROWS_AS(parse_config_text(canonical_config_text(cfg)),
                    ValidationError);
}

TEST_CASE("comments and blank lines are tolerated") {
    const std::string text =
        "# leading comment\n"
        "\n"
        "[probe]\n"
        "power_w = 1e-8   # trailing comment\n"
        "waist_m = 8e-4\n"
        "\n"
        "[coupling]  # section comment\n"
        "power_w = 0.14\n"
        "waist_m = 8e-4\n"
        "propagation_sign = -1\n"
        "\n"
        "[drive]\n"
        "e_ac_v_m = 250\n";
    const ExperimentConfig cfg = parse_config_text(text);
    CHECK(cfg.probe.power == 1e-8);
    CHECK(cfg.probe.waist == 8e-4);
    CHECK(cfg.coupling.power == 0.14);
    CHECK(cfg.drive.e_ac == 250.0);
}

TEST_CASE("unknown sections and keys fail closed with a line number") {
    CHECK_THROWS_WITH_AS(parse_config_text("[beam]\npower_w = 1\n"),
                         doctest::Contains("line 1"), ValidationError);
    try {
        parse_config_text("[probe]\npowerw = 1e-8\n");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        const std::string what = e.what();
        CHECK(what.find("line 2") != std::string::npos);
        CHECK(what.find("powerw") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config_text("[probe]\npower_w = not_a_number\n"),
                    ValidationError);
    CHECK_THROWS_AS(parse_config_text("stray = 1\n"), ValidationError);
}

TEST_CASE("load_config reads a file and rejects a missing one") {
    const ExperimentConfig cfg = nondefault_config();
    const std::string path = "test_config_roundtrip.ini";
    {
        std::ofstream out(path, std::ios::binary);
        out << canonical_config_text(cfg);
    }
    const ExperimentConfig back = load_config(path);
    CHECK(canonical_config_text(back) == canonical_config_text(cfg));
    std::remove(path.c_str());

    CHECK_THROWS_AS(load_config("no_such_config_file.ini"), ValidationError);
}

TEST_CASE("validation rejects out-of-range physics settings") {
    ExperimentConfig cfg = nondefault_config();
    cfg.cell.temperature = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);

    cfg = nondefault_config();
    cfg.numerics.scan_points = 1;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);

    cfg = nondefault_config();
    cfg.scaling.width_exponent = 0.8;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg.scaling.width_exponent = 1.7;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);

    cfg = nondefault_config();
    cfg.kerr.field_min = 400.0;  // above field_max
    CHECK_THROWS_AS(cfg.validate(), ValidationError);

    cfg = nondefault_config();
    cfg.drive.frequency = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("response mode names round-trip and reject typos") {
    for (ResponseMode mode : {ResponseMode::quasi_static, ResponseMode::filtered,
                              ResponseMode::full_obe}) {
        CHECK(response_mode_from_string(to_string(mode)) == mode);
    }
    CHECK_THROWS_AS(response_mode_from_string("quasistatic"), ValidationError);
}

TEST_CASE("drive field waveform and mean square") {
    FieldDrive drive;
    drive.e_dc = 5.0;
    drive.e_ac = 250.0;
    drive.frequency = 1e4;
    CHECK(drive.field_at(0.0) == 5.0);
    const double quarter = 0.25 / drive.frequency;
    CHECK(rel_err(drive.field_at(quarter), 255.0) < 1e-12);
    CHECK(rel_err(drive.mean_square_field(), 5.0 * 5.0 + 0.5 * 250.0 * 250.0) <
          1e-12);
    CHECK(drive.max_abs_field() == 255.0);

    drive.e_ac = -1.0;
    CHECK_THROWS_AS(drive.validate(), ValidationError);
}

TEST_CASE("rebuild_for_n rescales the coupling strength") {
    ExperimentConfig cfg = nondefault_config();
    cfg.rydberg.n = 32;
    const ModelContext base = build_context(cfg);
    const ModelContext high = rebuild_for_n(base, 48);
    CHECK(high.level.n == 48);
    CHECK(high.cfg.rydberg.n == 48);
    // omega_c follows the coupling dipole: (n*/n*_ref)^(-3/2).
    const double expected =
        base.omega_c * std::pow(high.level.n_star / base.level.n_star, -1.5);
    CHECK(rel_err(high.omega_c, expected) < 1e-12);
    CHECK(high.level.polarizability > base.level.polarizability);
    // Everything not tied to the level is untouched.
    CHECK(high.omega_p == base.omega_p);
    CHECK(high.density == base.density);
}
