#include "rydeo/modulation.hpp"

#include <cmath>
#include <sstream>

#include "rydeo/constants.hpp"
#include "rydeo/errors.hpp"
#include "rydeo/spectra.hpp"

namespace rydeo {

using cd = std::complex<double>;

double TimeTrace::sample_dt() const {
    if (nu_m <= 0.0 || samples_per_period <= 0) {
        throw ValidationError("TimeTrace: invalid sampling metadata");
    }
    return 1.0 / (nu_m * static_cast<double>(samples_per_period));
}

double lock_offset_symmetric(const ModelContext& ctx, const FieldDrive& drive) {
    drive.validate();
    return 0.5 * ctx.level.polarizability * drive.mean_square_field();
}

namespace {

struct PeriodSamples {
    double dt = 0.0;
    std::vector<double> field;
    std::vector<cd> response;  // complex k l chi / 2 per sample
};

double kl_for(const ModelContext& ctx) {
    return constants::two_pi / ctx.system().probe_wavelength *
           ctx.cfg.cell.length;
}

// One drive period of the quasi-static complex response. The velocity grid
// is converged at the first sample and reused: the feature widths entering
// the grid step do not depend on the instantaneous detuning.
PeriodSamples quasi_static_period(const ModelContext& ctx,
                                  const FieldDrive& drive, double lock_offset,
                                  int samples_per_period) {
    PeriodSamples out;
    out.dt = 1.0 / (drive.frequency * static_cast<double>(samples_per_period));
    out.field.resize(samples_per_period);
    out.response.resize(samples_per_period);

    DetuningPoint base = ctx.beam_detunings();
    base.coupling += lock_offset;

    const double kl = kl_for(ctx);
    VelocityGrid grid;
    for (int j = 0; j < samples_per_period; ++j) {
        const double t = out.dt * static_cast<double>(j);
        const double e = drive.field_at(t);
        DetuningPoint p = base;
        p.stark = stark_shift(ctx.level.polarizability, e);
        ComplexSusceptibility chi;
        if (j == 0) {
            DopplerAverage avg = doppler_average_chi(
                ctx.system(), p, ctx.omega_c, ctx.density,
                ctx.cfg.cell.temperature, ctx.geometry, ctx.grid);
            chi = avg.value;
            grid = std::move(avg.grid);
        } else {
            chi = doppler_average_chi_on_grid(ctx.system(), p, ctx.omega_c,
                                              ctx.density, ctx.geometry, grid);
        }
        out.field[j] = e;
        out.response[j] = 0.5 * kl * chi.chi;
    }
    return out;
}

// Full master-equation treatment of the velocity classes whose probe
// detuning stays inside the configured window; everything further out
// follows the drive adiabatically and is closed quasi-statically.
PeriodSamples full_obe_period(const ModelContext& ctx, const FieldDrive& drive,
                              double lock_offset, int samples_per_period) {
    const LadderSystem& sys = ctx.system();
    const NumericsConfig& num = ctx.cfg.numerics;
    PeriodSamples out;
    const double period = 1.0 / drive.frequency;
    out.dt = period / static_cast<double>(samples_per_period);
    out.field.resize(samples_per_period);
    out.response.resize(samples_per_period, cd(0.0, 0.0));
    for (int j = 0; j < samples_per_period; ++j) {
        out.field[j] = drive.field_at(out.dt * static_cast<double>(j));
    }

    DetuningPoint base = ctx.beam_detunings();
    base.coupling += lock_offset;

    // Converge the grid on the static problem at t = 0.
    DetuningPoint p0 = base;
    p0.stark = stark_shift(ctx.level.polarizability, out.field[0]);
    DopplerAverage avg =
        doppler_average_chi(sys, p0, ctx.omega_c, ctx.density,
                            ctx.cfg.cell.temperature, ctx.geometry, ctx.grid);
    const VelocityGrid grid = std::move(avg.grid);

    const double kl = kl_for(ctx);
    const double kp = sys.probe_wavevector();
    const double v_cut = num.obe_detuning_cap / kp;
    const double max_stark =
        0.5 * ctx.level.polarizability * drive.max_abs_field() *
        drive.max_abs_field();

    // Warmup long enough for the slowest coherence to settle, at least two
    // periods; the per-class start from the instantaneous steady state makes
    // this conservative.
    int warmup = num.warmup_periods;
    if (warmup == 0) {
        const double relax = std::min(
            0.5 * sys.gamma2,
            sys.gamma31() + 0.25 * ctx.omega_c * ctx.omega_c / sys.gamma21());
        warmup = std::max(2, static_cast<int>(std::ceil(8.0 / (relax * period))));
    }

    // Step-count budget before doing any work.
    long total_steps = 0;
    std::vector<int> steps_per_sample(grid.velocity.size(), 0);
    for (std::size_t i = 0; i < grid.velocity.size(); ++i) {
        const double v = grid.velocity[i];
        if (std::abs(v) > v_cut) continue;
        const DetuningPoint shifted = shifted_point(sys, base, v, ctx.geometry);
        const double d_static = shifted.two_photon();
        const double max_d2 =
            std::max(std::abs(d_static), std::abs(d_static - max_stark));
        const double rate = obe_rate_bound(sys, ctx.omega_p, ctx.omega_c,
                                           shifted.probe, max_d2);
        const int sps = std::max(
            1, static_cast<int>(std::ceil(out.dt * rate / num.obe_dt_safety)));
        steps_per_sample[i] = sps;
        total_steps += static_cast<long>(sps) * samples_per_period *
                       (warmup + 1);
    }
    if (total_steps > num.obe_max_total_steps) {
        std::ostringstream os;
        os << "modulated_response: full-obe needs " << total_steps
           << " integrator steps, budget is " << num.obe_max_total_steps
           << "; raise obe_max_total_steps or lower obe_detuning_cap";
        throw ConfigurationError(os.str());
    }
    if (total_steps == 0) {
        throw ConfigurationError(
            "modulated_response: obe_detuning_cap excludes every velocity "
            "class; full-obe mode needs at least the v = 0 class");
    }

    const double chi_scale =
        2.0 * chi_prefactor(sys, ctx.density) / ctx.omega_p;

    for (std::size_t i = 0; i < grid.velocity.size(); ++i) {
        const double v = grid.velocity[i];
        const double w = grid.weight[i];
        const DetuningPoint shifted = shifted_point(sys, base, v, ctx.geometry);
        if (std::abs(v) > v_cut) {
            // Adiabatic closure: steady-state response at the instantaneous
            // field for this far-detuned class.
            for (int j = 0; j < samples_per_period; ++j) {
                DetuningPoint p = shifted;
                p.stark = stark_shift(ctx.level.polarizability, out.field[j]);
                out.response[j] +=
                    w * weak_probe_chi(sys, p, ctx.omega_c, ctx.density).chi;
            }
            continue;
        }

        const double d_static = shifted.two_photon();
        const auto two_photon = [&](double t) {
            const double e = drive.field_at(t);
            return d_static + stark_shift(ctx.level.polarizability, e);
        };
        const double max_d2 =
            std::max(std::abs(d_static), std::abs(d_static - max_stark));
        const int sps = steps_per_sample[i];
        const double dt = out.dt / static_cast<double>(sps);

        DetuningPoint p_init = shifted;
        p_init.stark = stark_shift(ctx.level.polarizability,
                                   drive.field_at(-warmup * period));
        DensityMatrixState state =
            steady_state_oracle(sys, p_init, ctx.omega_p, ctx.omega_c);

        const long warm_steps = static_cast<long>(sps) * samples_per_period *
                                warmup;
        ObeTrace warm = obe_time_evolution(
            sys, shifted.probe, two_photon, max_d2, ctx.omega_p, ctx.omega_c,
            -warmup * period, 0.0, dt, static_cast<int>(warm_steps), &state,
            num.obe_dt_safety);
        state = warm.states.back();

        ObeTrace rec = obe_time_evolution(
            sys, shifted.probe, two_photon, max_d2, ctx.omega_p, ctx.omega_c,
            0.0, period, dt, sps, &state, num.obe_dt_safety);
        // rec.states[j] sits at t = j * out.dt; the final sample (t = period)
        // duplicates the start of the next period and is dropped.
        for (int j = 0; j < samples_per_period; ++j) {
            out.response[j] += w * chi_scale * rec.states[j].rho(1, 0);
        }
    }

    for (int j = 0; j < samples_per_period; ++j) out.response[j] *= 0.5 * kl;
    return out;
}

TimeTrace assemble(const ModelContext& ctx, const FieldDrive& drive,
                   ResponseMode mode, int periods, int samples_per_period,
                   double lock_offset, double gamma_eit,
                   const PeriodSamples& period) {
    TimeTrace trace;
    trace.mode = mode;
    trace.nu_m = drive.frequency;
    trace.periods = periods;
    trace.samples_per_period = samples_per_period;
    trace.lock_offset = lock_offset;
    trace.gamma_eit = gamma_eit;
    const long n = static_cast<long>(periods) * samples_per_period;
    trace.time.resize(n);
    trace.field.resize(n);
    trace.transmission.resize(n);
    trace.phase.resize(n);
    for (long j = 0; j < n; ++j) {
        const int k = static_cast<int>(j % samples_per_period);
        trace.time[j] = period.dt * static_cast<double>(j);
        trace.field[j] = period.field[k];
        trace.transmission[j] = std::exp(-2.0 * period.response[k].imag());
        trace.phase[j] = period.response[k].real();
    }
    (void)ctx;
    return trace;
}

}  // namespace

double effective_gamma_eit(const ModelContext& ctx) {
    if (ctx.cfg.numerics.gamma_eit > 0.0) return ctx.cfg.numerics.gamma_eit;
    const ScanTrace scan = eit_scan(ctx, ScanAxis::coupling);
    const ResonanceSummary summary = summarize_resonance(scan);
    return 0.5 * summary.fwhm;
}

double optimize_lock_offset(const ModelContext& ctx, const FieldDrive& drive) {
    drive.validate();
    const double symmetric = lock_offset_symmetric(ctx, drive);
    if (drive.e_ac == 0.0) return symmetric;

    // 2nd-harmonic phase amplitude of a short quasi-static trace.
    const int spp = 64;
    const auto metric = [&](double lock) {
        const PeriodSamples period = quasi_static_period(ctx, drive, lock, spp);
        std::vector<double> phase(spp);
        for (int j = 0; j < spp; ++j) phase[j] = period.response[j].real();
        const HarmonicSpectrum h =
            harmonics(phase, period.dt, drive.frequency, 2);
        return h.amplitude[2];
    };
    // The symmetric point centers the Stark excursion on the window, which
    // is where the dispersive slope (hence the 2nd harmonic) peaks; search
    // one excursion radius around it.
    const double radius = std::max(
        0.25 * ctx.level.polarizability * drive.e_ac * drive.e_ac,
        std::abs(symmetric) * 1e-3 + 1.0);
    return golden_section_max(metric, symmetric - radius, symmetric + radius,
                              radius * 2e-4);
}

TimeTrace modulated_response(const ModelContext& ctx, const FieldDrive& drive,
                             ResponseMode mode, int periods,
                             int samples_per_period) {
    drive.validate();
    if (samples_per_period < 64) {
        throw ValidationError(
            "modulated_response: samples_per_period must be >= 64");
    }
    if (periods < 4) {
        throw ValidationError("modulated_response: periods must be >= 4");
    }

    const double lock = ctx.cfg.numerics.lock_offset_auto
                            ? optimize_lock_offset(ctx, drive)
                            : ctx.cfg.numerics.lock_offset;

    double gamma_eit = 0.0;
    PeriodSamples period;
    switch (mode) {
        case ResponseMode::quasi_static:
            period = quasi_static_period(ctx, drive, lock, samples_per_period);
            break;
        case ResponseMode::filtered: {
            period = quasi_static_period(ctx, drive, lock, samples_per_period);
            gamma_eit = effective_gamma_eit(ctx);
            period.response =
                periodic_lowpass(period.response, drive.frequency, gamma_eit);
            break;
        }
        case ResponseMode::full_obe:
            period = full_obe_period(ctx, drive, lock, samples_per_period);
            break;
    }
    return assemble(ctx, drive, mode, periods, samples_per_period, lock,
                    gamma_eit, period);
}

TimeTrace modulated_response(const ModelContext& ctx) {
    return modulated_response(ctx, ctx.cfg.drive, ctx.cfg.numerics.mode,
                              ctx.cfg.numerics.periods,
                              ctx.cfg.numerics.samples_per_period);
}

ComplexTrace output_field(const TimeTrace& trace, double heterodyne_hz) {
    if (trace.time.size() != trace.transmission.size() ||
        trace.time.size() != trace.phase.size() || trace.time.empty()) {
        throw ValidationError("output_field: malformed trace");
    }
    ComplexTrace out;
    out.time = trace.time;
    out.amplitude.resize(trace.time.size());
    for (std::size_t j = 0; j < trace.time.size(); ++j) {
        const double t = trace.transmission[j];
        if (t < 0.0) throw NumericalError("output_field: negative transmission");
        double arg = trace.phase[j];
        if (heterodyne_hz != 0.0) {
            arg += constants::two_pi * heterodyne_hz * trace.time[j];
        }
        out.amplitude[j] = std::polar(std::sqrt(t), arg);
    }
    return out;
}

}  // namespace rydeo
