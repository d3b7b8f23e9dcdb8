#pragma once

#include "rydeo/config.hpp"
#include "rydeo/fitting.hpp"

namespace rydeo {

enum class ScanAxis { probe, coupling };

std::string to_string(ScanAxis axis);

// Thin-medium observables from the averaged susceptibility:
//   T = exp(-k l Im chi),  phi = k l Re chi / 2.
// Valid only for |chi| << 1; |chi| >= 0.1 throws ModelValidityError.
struct MediumResponse {
    double transmission = 0.0;
    double phase = 0.0;  // rad
};

MediumResponse transmission_and_phase(const ComplexSusceptibility& chi,
                                      double length_m, double wavelength_m);

struct ScanTrace {
    ScanAxis axis = ScanAxis::coupling;
    std::vector<double> detuning;      // rad/s, relative to the beam detuning
    std::vector<double> transmission;
    std::vector<double> phase;         // rad
};

// Sweep one laser detuning across [-span/2, +span/2] around its configured
// value with everything else fixed and no applied field. The velocity grid is
// converged once and reused: the resonant feature widths do not depend on the
// scan offset.
ScanTrace eit_scan(const ModelContext& ctx, ScanAxis axis, double span_rad_s,
                   int points);

// Convenience overload using numerics.scan_span / scan_points.
ScanTrace eit_scan(const ModelContext& ctx, ScanAxis axis);

struct ResonanceSummary {
    double center = 0.0;                // rad/s
    double fwhm = 0.0;                  // rad/s
    double contrast = 0.0;              // transmission peak above background
    double max_dispersion_slope = 0.0;  // rad per (rad/s), d phase / d detuning
    double fit_residual_rms = 0.0;
};

// Lorentzian fit of the transparency window in a scan (or of the absorption
// dip when `dip` is set). NotFoundError when the trace has no feature above
// `min_contrast`.
ResonanceSummary summarize_resonance(const ScanTrace& trace,
                                     double min_contrast = 1e-6,
                                     bool dip = false);

// Doppler-averaged observables at one detuning point (field folded into
// point.stark). Converges its own grid.
MediumResponse static_response(const ModelContext& ctx,
                               const DetuningPoint& point);

}  // namespace rydeo
