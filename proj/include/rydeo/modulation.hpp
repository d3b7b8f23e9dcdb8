#pragma once

#include <complex>
#include <vector>

#include "rydeo/config.hpp"
#include "rydeo/medium.hpp"

namespace rydeo {

struct TimeTrace {
    ResponseMode mode = ResponseMode::quasi_static;
    double nu_m = 0.0;           // Hz
    int periods = 0;
    int samples_per_period = 0;
    double lock_offset = 0.0;    // rad/s actually applied
    double gamma_eit = 0.0;      // rad/s, filtered mode only
    std::vector<double> time;    // s, uniform grid over integer periods
    std::vector<double> field;   // V/m
    std::vector<double> transmission;
    std::vector<double> phase;   // rad

    double sample_dt() const;
};

// Lock offset that centers the Stark excursion on the dark resonance:
// +alpha/2 * <E^2>, cancelling the mean Stark shift of the drive.
double lock_offset_symmetric(const ModelContext& ctx, const FieldDrive& drive);

// The shipped lock-offset helper: maximizes the 2nd-harmonic phase amplitude
// of a quasi-static trace by golden-section search around the symmetric
// point. Deterministic.
double optimize_lock_offset(const ModelContext& ctx, const FieldDrive& drive);

// Drive field -> Stark-shifted two-photon detuning -> transmission/phase
// trace. Modes:
//   quasi-static: per-sample Doppler-averaged steady-state response;
//   filtered:     quasi-static complex response k*l*chi/2 through a
//                 single-pole low-pass of half-width gamma_eit;
//   full-obe:     per-velocity-class time integration inside the detuning
//                 window |k_p v| <= obe_detuning_cap, quasi-static closure
//                 outside it (far classes adiabatically follow the drive).
// The drive is periodic, so one period is computed after warmup and tiled.
TimeTrace modulated_response(const ModelContext& ctx, const FieldDrive& drive,
                             ResponseMode mode, int periods,
                             int samples_per_period);

// Overload pulling drive/mode/periods/samples from the config.
TimeTrace modulated_response(const ModelContext& ctx);

struct ComplexTrace {
    std::vector<double> time;                   // s
    std::vector<std::complex<double>> amplitude;
};

// Optical envelope a(t) = sqrt(T) exp(i phi), optionally heterodyned.
ComplexTrace output_field(const TimeTrace& trace, double heterodyne_hz = 0.0);

// gamma_eit for the filtered mode: the config override when set, otherwise
// half the fitted FWHM of a coupling-axis scan.
double effective_gamma_eit(const ModelContext& ctx);

}  // namespace rydeo
