#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rydeo/atomic_data.hpp"
#include "rydeo/constants.hpp"
#include "rydeo/errors.hpp"

using namespace rydeo;
namespace k = rydeo::constants;

namespace {

double rel_err(double value, double reference) {
    return std::abs(value - reference) / std::abs(reference);
}

}  // namespace

TEST_CASE("default ladder rates and derived coherence widths") {
    const LadderSystem sys = rb85_ladder();
    CHECK(rel_err(sys.gamma2, k::two_pi * 6.07e6) < 1e-14);
    CHECK(rel_err(sys.gamma3, k::two_pi * 1.0e4) < 1e-14);
    CHECK(sys.deph12 == 0.0);
    CHECK(rel_err(sys.deph13, k::two_pi * 1.0e6) < 1e-14);

    // gamma21 = gamma2/2 + deph12 etc.; regression-pinned values.
    CHECK(rel_err(sys.gamma21(), 19069467.407290045) < 1e-14);
    CHECK(rel_err(sys.gamma31(), 6314601.2337154839) < 1e-14);
    CHECK(sys.gamma32() ==
          0.5 * (sys.gamma2 + sys.gamma3) + sys.deph12 + sys.deph13);

    CHECK(rel_err(sys.atomic_mass, 1.4099934407487397e-25) < 1e-14);
    CHECK(rel_err(sys.probe_wavevector(), 8052877.6457268791) < 1e-14);
    CHECK(rel_err(sys.coupling_wavevector(), 13089969.389957473) < 1e-14);
    CHECK_NOTHROW(sys.validate());
}

TEST_CASE("ladder validation rejects non-physical rates") {
    LadderSystem sys = rb85_ladder();
    sys.gamma2 = -1.0;
    CHECK_THROWS_AS(sys.validate(), ValidationError);

    sys = rb85_ladder();
    sys.probe_wavelength = 0.0;
    CHECK_THROWS_AS(sys.validate(), ValidationError);

    sys = rb85_ladder();
    sys.dipole_probe = -sys.dipole_probe;
    CHECK_THROWS_AS(sys.validate(), ValidationError);
}

TEST_CASE("saturated vapor density: pinned values and heating ratio") {
    const double n293 = vapor_number_density(293.15);
    const double n333 = vapor_number_density(333.15);

    // Regression pins for the vapor-pressure correlation.
    CHECK(rel_err(n293, 7540935312626237.0) < 1e-12);
    CHECK(rel_err(n333, 3.3768381851717907e17) < 1e-12);

    CHECK(n293 > 2e15);
    CHECK(n293 < 2e16);

    const double ratio = n333 / n293;
    CHECK(ratio > 20.0);
    CHECK(ratio < 80.0);
    CHECK(rel_err(ratio, 44.780097496894712) < 1e-12);
}

TEST_CASE("vapor density is strictly monotone over the validity window") {
    double prev = vapor_number_density(250.0);
    for (double t = 252.0; t <= 450.0; t += 2.0) {
        const double n = vapor_number_density(t);
        CHECK(n > prev);
        prev = n;
    }
}

TEST_CASE("vapor density rejects temperatures outside the correlation") {
    CHECK_THROWS_AS(vapor_number_density(200.0), ValidationError);
    CHECK_THROWS_AS(vapor_number_density(500.0), ValidationError);
    CHECK_THROWS_AS(vapor_number_density(-10.0), ValidationError);
}

TEST_CASE("cell density override bypasses the vapor curve") {
    CellConfig cell;
    cell.temperature = 293.15;
    CHECK(vapor_number_density(cell) == vapor_number_density(293.15));

    cell.density_override = 1.25e14;
    CHECK(vapor_number_density(cell) == 1.25e14);

    cell.density_override = -1.0;
    CHECK_THROWS_AS(cell.validate(), ValidationError);
}

TEST_CASE("cell and beam validation") {
    CellConfig cell;
    cell.length = 0.0;
    CHECK_THROWS_AS(cell.validate(), ValidationError);

    cell = CellConfig{};
    cell.temperature = -5.0;
    CHECK_THROWS_AS(cell.validate(), ValidationError);

    BeamConfig beam;
    beam.power = 0.01;
    beam.waist = 8e-4;
    CHECK_NOTHROW(beam.validate());
    beam.power = -0.01;
    CHECK_THROWS_AS(beam.validate(), ValidationError);
    beam.power = 0.01;
    beam.waist = 0.0;
    CHECK_THROWS_AS(beam.validate(), ValidationError);
    beam.waist = 8e-4;
    beam.propagation_sign = 2;
    CHECK_THROWS_AS(beam.validate(), ValidationError);
}

TEST_CASE("a dark beam is a usage error, not a zero") {
    const LadderSystem sys = rb85_ladder();
    CHECK_THROWS_AS(rabi_frequency(0.0, 8e-4, sys.dipole_probe),
                    ValidationError);
    CHECK_THROWS_AS(beam_peak_field(0.0, 8e-4), ValidationError);
}

TEST_CASE("Rabi frequency scales as sqrt(power)") {
    const LadderSystem sys = rb85_ladder();
    const double base = rabi_frequency(0.035, 8e-4, sys.dipole_coupling_ref);
    const double quad = rabi_frequency(4.0 * 0.035, 8e-4, sys.dipole_coupling_ref);
    CHECK(rel_err(quad, 2.0 * base) < 1e-14);
}

TEST_CASE("reference coupling beam: pinned field and Rabi frequency") {
    // 140 mW in a 0.8 mm waist driving the reference coupling dipole.
    const LadderSystem sys = rb85_ladder();
    CHECK(rel_err(beam_peak_field(0.14, 8e-4), 10243.405701090065) < 1e-12);
    CHECK(rel_err(rabi_frequency(0.14, 8e-4, sys.dipole_coupling_ref),
                  21952129.301463731) < 1e-12);
    // Weak probe: well below gamma2, the linear-response regime.
    const double op = rabi_frequency(1e-8, 8e-4, sys.dipole_probe);
    CHECK(rel_err(op, 930405.3437874798) < 1e-12);
    CHECK(op < sys.gamma2 / 40.0);
}

TEST_CASE("Rabi helpers reject non-physical inputs") {
    CHECK_THROWS_AS(rabi_frequency(-1.0, 8e-4, 1e-29), ValidationError);
    CHECK_THROWS_AS(rabi_frequency(0.1, 0.0, 1e-29), ValidationError);
    CHECK_THROWS_AS(rabi_frequency(0.1, 8e-4, -1e-29), ValidationError);
    CHECK_THROWS_AS(beam_peak_field(0.1, -8e-4), ValidationError);
}
