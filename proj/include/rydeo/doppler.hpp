#pragma once

#include "rydeo/eit_core.hpp"

namespace rydeo {

enum class BeamGeometry { counter_propagating, co_propagating };

// One-dimensional thermal velocity scale sqrt(kB T / m).
double thermal_velocity_sigma(double temperature_k, double mass_kg);

// Residual two-photon wavevector |k_c -+ k_p| (rad/m); the minus sign applies
// to counter-propagating beams.
double residual_wavevector(const LadderSystem& sys, BeamGeometry geometry);

// Symmetric uniform velocity grid with Maxwell-Boltzmann weights normalized
// to unit sum. Always contains v = 0 and v -> -v pairs so parity-odd
// integrands cancel exactly.
struct VelocityGrid {
    std::vector<double> velocity;
    std::vector<double> weight;
    double sigma_v = 0.0;
};

VelocityGrid build_velocity_grid(double sigma_v, double step, double halfspan);

struct VelocityGridSpec {
    double step_fraction = 0.25;   // of the narrowest resonant velocity width
    double span_sigmas = 8.0;      // halfspan in units of sigma_v
    double tolerance = 1e-6;       // relative change on node doubling
    long max_nodes = 2'000'000;
    int min_halfspan_nodes = 16;   // at least 2*16+1 nodes total
};

struct DopplerAverage {
    ComplexSusceptibility value;
    long nodes = 0;           // node count of the accepted grid
    double rel_change = 0.0;  // last doubling change, <= tolerance
    VelocityGrid grid;        // accepted grid, reusable at nearby detunings
};

// Narrowest velocity-domain feature width of the weak-probe response: the
// one-photon width gamma21/k_p and the power-broadened two-photon width
// (gamma31 + Oc^2/(4 gamma21))/k_res. Sets the starting grid step.
double narrowest_velocity_feature(const LadderSystem& sys, double omega_c,
                                  BeamGeometry geometry);

// Thermal average of the weak-probe susceptibility. Each velocity class sees
// dp - k_p v and, for counter-propagating beams, d2 - (k_c - k_p) v. The grid
// step is halved until the result moves by less than spec.tolerance;
// ConvergenceError if max_nodes is hit first.
DopplerAverage doppler_average_chi(const LadderSystem& sys,
                                   const DetuningPoint& point, double omega_c,
                                   double density, double temperature_k,
                                   BeamGeometry geometry,
                                   const VelocityGridSpec& spec = {});

// Average over a caller-supplied grid. The feature width is independent of
// the detuning point, so a grid accepted by doppler_average_chi stays valid
// across a scan or a drive period.
ComplexSusceptibility doppler_average_chi_on_grid(const LadderSystem& sys,
                                                  const DetuningPoint& point,
                                                  double omega_c, double density,
                                                  BeamGeometry geometry,
                                                  const VelocityGrid& grid);

// Detunings seen by one velocity class.
DetuningPoint shifted_point(const LadderSystem& sys, const DetuningPoint& point,
                            double velocity, BeamGeometry geometry);

}  // namespace rydeo
