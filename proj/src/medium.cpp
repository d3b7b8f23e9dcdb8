#include "rydeo/medium.hpp"

#include <cmath>
#include <sstream>

#include "rydeo/constants.hpp"
#include "rydeo/errors.hpp"

namespace rydeo {

std::string to_string(ScanAxis axis) {
    return axis == ScanAxis::probe ? "probe" : "coupling";
}

MediumResponse transmission_and_phase(const ComplexSusceptibility& chi,
                                      double length_m, double wavelength_m) {
    if (!(length_m > 0.0) || !(wavelength_m > 0.0)) {
        throw ValidationError("transmission_and_phase: length and wavelength must be > 0");
    }
    const double mag = std::abs(chi.chi);
    if (!(mag < 0.1)) {
        std::ostringstream os;
        os << "transmission_and_phase: |chi| = " << mag
           << " exceeds 0.1, outside the dilute-medium expansion";
        throw ModelValidityError(os.str());
    }
    const double kl = constants::two_pi / wavelength_m * length_m;
    MediumResponse r;
    r.transmission = std::exp(-kl * chi.chi.imag());
    r.phase = 0.5 * kl * chi.chi.real();
    return r;
}

ScanTrace eit_scan(const ModelContext& ctx, ScanAxis axis, double span_rad_s,
                   int points) {
    if (points < 11) {
        std::ostringstream os;
        os << "eit_scan: " << points << " points requested, minimum is 11";
        throw ValidationError(os.str());
    }
    if (!(span_rad_s > 0.0)) {
        throw ValidationError("eit_scan: span must be > 0");
    }
    const LadderSystem& sys = ctx.system();
    const DetuningPoint base = ctx.beam_detunings();

    // Converge the velocity grid at the scan center, reuse it across points.
    const DopplerAverage center = doppler_average_chi(
        sys, base, ctx.omega_c, ctx.density, ctx.cfg.cell.temperature,
        ctx.geometry, ctx.grid);

    ScanTrace trace;
    trace.axis = axis;
    trace.detuning.resize(points);
    trace.transmission.resize(points);
    trace.phase.resize(points);
    for (int i = 0; i < points; ++i) {
        const double x = -0.5 * span_rad_s +
                         span_rad_s * static_cast<double>(i) /
                             static_cast<double>(points - 1);
        DetuningPoint p = base;
        (axis == ScanAxis::probe ? p.probe : p.coupling) += x;
        const ComplexSusceptibility chi = doppler_average_chi_on_grid(
            sys, p, ctx.omega_c, ctx.density, ctx.geometry, center.grid);
        const MediumResponse r = transmission_and_phase(
            chi, ctx.cfg.cell.length, sys.probe_wavelength);
        trace.detuning[i] = x;
        trace.transmission[i] = r.transmission;
        trace.phase[i] = r.phase;
    }
    return trace;
}

ScanTrace eit_scan(const ModelContext& ctx, ScanAxis axis) {
    return eit_scan(ctx, axis, ctx.cfg.numerics.scan_span,
                    ctx.cfg.numerics.scan_points);
}

ResonanceSummary summarize_resonance(const ScanTrace& trace,
                                     double min_contrast, bool dip) {
    if (trace.detuning.size() < 11) {
        throw ValidationError("summarize_resonance: trace too short");
    }
    const LorentzianPeak peak = fit_lorentzian_peak(
        trace.detuning, trace.transmission, dip, min_contrast);

    ResonanceSummary summary;
    summary.center = peak.center;
    summary.fwhm = peak.fwhm();
    summary.contrast = std::abs(peak.height);
    summary.fit_residual_rms = peak.residual_rms;

    double max_slope = 0.0;
    for (std::size_t i = 1; i + 1 < trace.detuning.size(); ++i) {
        const double dx = trace.detuning[i + 1] - trace.detuning[i - 1];
        if (dx == 0.0) continue;
        const double slope =
            std::abs((trace.phase[i + 1] - trace.phase[i - 1]) / dx);
        max_slope = std::max(max_slope, slope);
    }
    summary.max_dispersion_slope = max_slope;
    return summary;
}

MediumResponse static_response(const ModelContext& ctx,
                               const DetuningPoint& point) {
    const DopplerAverage avg = doppler_average_chi(
        ctx.system(), point, ctx.omega_c, ctx.density, ctx.cfg.cell.temperature,
        ctx.geometry, ctx.grid);
    return transmission_and_phase(avg.value, ctx.cfg.cell.length,
                                  ctx.system().probe_wavelength);
}

}  // namespace rydeo
