#pragma once

namespace rydeo {

// One Rydberg ns level characterized by its effective principal quantum
// number and scalar polarizability (rad/s per (V/m)^2).
struct RydbergLevel {
    int n = 0;
    double quantum_defect = 0.0;
    double n_star = 0.0;
    double polarizability = 0.0;
};

// n* = n - delta. Throws ValidationError unless n > delta >= 0.
double effective_quantum_number(int n, double quantum_defect);

// alpha(n*) = alpha_ref (n*/n*_ref)^7.
double scaled_polarizability(double alpha_ref, double n_star_ref, double n_star);

// d(n*) = d_ref (n*/n*_ref)^(-3/2). The intermediate-state overlap shrinks
// with the Rydberg orbit.
double scaled_coupling_dipole(double dipole_ref, double n_star_ref, double n_star);

RydbergLevel make_rydberg_level(int n, double quantum_defect,
                                double alpha_ref, double n_star_ref);

// DC Stark shift of the two-photon resonance: Delta_S = -alpha E^2 / 2.
// Negative for the low-field-seeking ns states considered here (alpha > 0).
double stark_shift(double polarizability, double field_v_per_m);

}  // namespace rydeo
