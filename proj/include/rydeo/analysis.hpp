#pragma once

#include <vector>

#include "rydeo/config.hpp"

namespace rydeo {

struct KerrSample {
    double field = 0.0;      // V/m, static amplitude E0
    double delta_phi = 0.0;  // rad, |phase(E0) - phase(0)|
};

struct KerrFitResult {
    double a = 0.0;             // rad/(V/m)^2
    double b = 0.0;             // (V/m)^-4
    double e_max = 0.0;         // V/m, b^(-1/4)
    double phi_max = 0.0;       // rad, a/(2 sqrt(b))
    double b0 = 0.0;            // m/V^2, a/(4 pi l)
    double length = 0.0;        // m
    double residual_norm = 0.0; // ||model - data||_2
    bool pre_maximum_only = false;  // data never passed the phase maximum
    int iterations = 0;
};

// Nonlinear least squares of delta_phi(E0) = a E0^2 / (1 + b E0^4).
// The derived fields follow from the fitted (a, b): the phase maximum sits
// at E0 = b^(-1/4) where delta_phi = a/(2 sqrt(b)), and comparing with
// 2 pi B0 l E0^2 at that point gives B0 = a/(4 pi l).
KerrFitResult fit_phase_vs_field(const std::vector<KerrSample>& samples,
                                 double length);

// B0 = phi_max / (2 pi length e_max^2); phi_max = 0 allowed (returns 0).
double kerr_coefficient(double phi_max, double e_max, double length);

struct PowerLawPoint {
    double n_star = 0.0;
    double value = 0.0;
};

struct ScalingFitResult {
    double exponent = 0.0;
    double exponent_stderr = 0.0;
    double prefactor = 0.0;  // value at n_star = 1
    std::vector<double> residuals;  // log-space, per point
};

// log-log linear regression; all inputs must be > 0.
ScalingFitResult fit_power_law(const std::vector<PowerLawPoint>& points);

// Static-field phase sweep at the configured lock point: for each E0 the
// two-photon detuning is Stark-shifted and the Doppler-averaged phase is
// compared against E = 0.
std::vector<KerrSample> kerr_field_sweep(const ModelContext& ctx,
                                         const std::vector<double>& fields);

std::vector<KerrSample> kerr_field_sweep(const ModelContext& ctx);

struct ScalingPoint {
    int n = 0;
    double n_star = 0.0;
    double b0 = 0.0;        // m/V^2 from the per-n Kerr fit
    double fwhm = 0.0;      // rad/s, fitted EIT window width
};

struct ScalingSweep {
    std::vector<ScalingPoint> points;
    ScalingFitResult kerr_fit;    // b0 vs n_star
    ScalingFitResult width_fit;   // fwhm vs n_star (exponent is negative)
    // 7 - 3 + w from the configured width-scaling exponent w: polarizability
    // n*^7, coupling-dipole-squared n*^-3, window width n*^-w.
    double predicted_exponent = 0.0;
};

// Kerr pipeline repeated across principal quantum numbers, with the
// ingredient prediction for the resulting b0 power law attached.
ScalingSweep scaling_sweep(const ModelContext& ctx,
                           const std::vector<int>& n_values);

ScalingSweep scaling_sweep(const ModelContext& ctx);

// Smallest field producing `phase_resolution` of phase: the small-field
// limit of the Kerr phase 2 pi b0 l E^2.
double min_detectable_field(double b0, double length, double phase_resolution);

// Coulomb field of charge q at distance r.
double point_charge_field(double charge, double distance);

// Kerr phase shift induced by that field.
double point_charge_phase(double charge, double distance, double b0,
                          double length);

}  // namespace rydeo
