#include "rydeo/atomic_data.hpp"

#include <cmath>
#include <sstream>

#include "rydeo/constants.hpp"
#include "rydeo/errors.hpp"

namespace rydeo {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw ValidationError(msg);
}

}  // namespace

double LadderSystem::probe_wavevector() const {
    return constants::two_pi / probe_wavelength;
}

double LadderSystem::coupling_wavevector() const {
    return constants::two_pi / coupling_wavelength;
}

void LadderSystem::validate() const {
    require(probe_wavelength > 0.0, "ladder: probe_wavelength must be > 0");
    require(coupling_wavelength > 0.0, "ladder: coupling_wavelength must be > 0");
    require(gamma2 > 0.0, "ladder: gamma2 must be > 0");
    require(gamma3 >= 0.0, "ladder: gamma3 must be >= 0");
    require(deph12 >= 0.0, "ladder: deph12 must be >= 0");
    require(deph13 >= 0.0, "ladder: deph13 must be >= 0");
    require(atomic_mass > 0.0, "ladder: atomic_mass must be > 0");
    require(dipole_probe > 0.0, "ladder: dipole_probe must be > 0");
    require(dipole_coupling_ref > 0.0, "ladder: dipole_coupling_ref must be > 0");
}

LadderSystem rb85_ladder() {
    LadderSystem sys;
    sys.probe_wavelength = 780.241e-9;
    sys.coupling_wavelength = 480.0e-9;
    sys.gamma2 = constants::two_pi * 6.07e6;
    sys.gamma3 = constants::two_pi * 1.0e4;
    sys.deph12 = 0.0;
    sys.deph13 = constants::two_pi * 1.0e6;
    sys.atomic_mass = 84.911789738 * constants::amu;
    sys.dipole_probe = 3.584e-29;
    sys.dipole_coupling_ref = 2.26e-31;
    return sys;
}

void CellConfig::validate() const {
    require(length > 0.0, "cell: length must be > 0");
    require(temperature > 0.0, "cell: temperature must be > 0");
    if (density_override) {
        require(*density_override > 0.0, "cell: density_override must be > 0");
    }
}

void BeamConfig::validate() const {
    require(power > 0.0, "beam: power must be > 0");
    require(waist > 0.0, "beam: waist must be > 0");
    require(propagation_sign == 1 || propagation_sign == -1,
            "beam: propagation_sign must be +1 or -1");
    require(std::isfinite(detuning), "beam: detuning must be finite");
}

double vapor_number_density(double temperature_k) {
    if (!(temperature_k >= 250.0 && temperature_k <= 450.0)) {
        std::ostringstream os;
        os << "vapor_number_density: temperature " << temperature_k
           << " K outside correlation range [250, 450] K";
        throw ValidationError(os.str());
    }
    // log10(P/Torr) correlation for Rb; coefficients frozen from the standard
    // alkali vapor-pressure tabulation. Solid and liquid branches meet at the
    // 312.46 K melting point.
    constexpr double melting_point = 312.46;
    double log10_p_torr;
    if (temperature_k < melting_point) {
        log10_p_torr = 2.881 + 4.857 - 4215.0 / temperature_k;
    } else {
        log10_p_torr = 2.881 + 4.312 - 4040.0 / temperature_k;
    }
    const double pressure = std::pow(10.0, log10_p_torr) * constants::torr_to_pa;
    return pressure / (constants::k_b * temperature_k);
}

double vapor_number_density(const CellConfig& cell) {
    cell.validate();
    if (cell.density_override) return *cell.density_override;
    return vapor_number_density(cell.temperature);
}

double beam_peak_field(double power_w, double waist_m) {
    require(power_w > 0.0, "beam_peak_field: power must be > 0");
    require(waist_m > 0.0, "beam_peak_field: waist must be > 0");
    // I_peak = 2P/(pi w^2), E = sqrt(2 I / (eps0 c)).
    return std::sqrt(4.0 * power_w /
                     (constants::eps0 * constants::c0 * constants::pi * waist_m * waist_m));
}

double rabi_frequency(double power_w, double waist_m, double dipole_cm) {
    require(dipole_cm > 0.0, "rabi_frequency: dipole must be > 0");
    return dipole_cm * beam_peak_field(power_w, waist_m) / constants::hbar;
}

}  // namespace rydeo
