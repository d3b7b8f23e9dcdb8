#pragma once

#include <optional>

namespace rydeo {

// Three-level ladder |1> -- probe -- |2> -- coupling -- |3>.
// All rates are angular (rad/s), dipole moments in C m, wavelengths in m.
struct LadderSystem {
    double probe_wavelength = 780.241e-9;
    double coupling_wavelength = 480.0e-9;
    double gamma2 = 0.0;     // population decay 2 -> 1
    double gamma3 = 0.0;     // population decay 3 -> 1
    double deph12 = 0.0;     // extra pure dephasing on the probe coherence
    double deph13 = 0.0;     // extra pure dephasing on the two-photon coherence
    double atomic_mass = 0.0;
    double dipole_probe = 0.0;
    double dipole_coupling_ref = 0.0;  // at the reference effective quantum number

    // Total coherence decay rates. gamma31 is the dark-resonance width floor.
    double gamma21() const { return 0.5 * gamma2 + deph12; }
    double gamma31() const { return 0.5 * gamma3 + deph13; }
    double gamma32() const { return 0.5 * (gamma2 + gamma3) + deph12 + deph13; }

    double probe_wavevector() const;
    double coupling_wavevector() const;

    void validate() const;  // throws ValidationError
};

// 85Rb 5s1/2 -- 5p3/2 -- ns ladder with the D2 natural linewidth and a
// collisionally broadened two-photon coherence typical of a warm cell.
LadderSystem rb85_ladder();

struct CellConfig {
    double length = 0.075;        // m
    double temperature = 293.15;  // K
    std::optional<double> density_override;  // m^-3, bypasses the vapor curve

    void validate() const;
};

struct BeamConfig {
    double power = 0.0;       // W
    double waist = 0.0;       // m, 1/e^2 intensity radius
    double detuning = 0.0;    // rad/s
    int propagation_sign = 1; // +1 / -1 along the cell axis

    void validate() const;
};

// Saturated Rb vapor number density (m^-3) from the vapor-pressure
// correlation. Valid for 250 K..450 K; throws ValidationError outside.
double vapor_number_density(double temperature_k);

// Override-aware variant.
double vapor_number_density(const CellConfig& cell);

// Peak on-axis field (V/m) of a Gaussian beam: E = sqrt(4 P / (eps0 c pi w^2)).
double beam_peak_field(double power_w, double waist_m);

// Peak Rabi frequency (rad/s) for a dipole moment d: Omega = d E / hbar.
double rabi_frequency(double power_w, double waist_m, double dipole_cm);

}  // namespace rydeo
