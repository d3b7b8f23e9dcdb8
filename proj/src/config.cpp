#include "rydeo/config.hpp"

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

std::string to_string(ResponseMode mode) {
    switch (mode) {
        case ResponseMode::quasi_static: return "quasi-static";
        case ResponseMode::filtered: return "filtered";
        case ResponseMode::full_obe: return "full-obe";
    }
    throw ValidationError("to_string: unknown response mode");
}

ResponseMode response_mode_from_string(const std::string& text) {
    if (text == "quasi-static") return ResponseMode::quasi_static;
    if (text == "filtered") return ResponseMode::filtered;
    if (text == "full-obe") return ResponseMode::full_obe;
    throw ValidationError("unknown mode '" + text +
                          "' (expected quasi-static, filtered or full-obe)");
}

double FieldDrive::field_at(double t) const {
    return e_dc + e_ac * std::sin(constants::two_pi * frequency * t);
}

double FieldDrive::mean_square_field() const {
    return e_dc * e_dc + 0.5 * e_ac * e_ac;
}

void FieldDrive::validate() const {
    require(e_dc >= 0.0, "drive: e_dc must be >= 0");
    require(e_ac >= 0.0, "drive: e_ac must be >= 0");
    require(e_dc + e_ac > 0.0, "drive: field amplitude must be nonzero");
    require(frequency > 0.0, "drive: frequency must be > 0");
}

void RydbergConfig::validate() const {
    require(quantum_defect >= 0.0, "rydberg: quantum_defect must be >= 0");
    require(static_cast<double>(n) > quantum_defect,
            "rydberg: n must exceed the quantum defect");
    require(static_cast<double>(n_ref) > quantum_defect,
            "rydberg: n_ref must exceed the quantum defect");
    require(alpha_ref > 0.0, "rydberg: alpha_ref must be > 0");
}

void NumericsConfig::validate() const {
    require(quadrature_tol > 0.0 && quadrature_tol <= 1e-2,
            "numerics: quadrature_tol must be in (0, 1e-2]");
    require(velocity_step_fraction > 0.0 && velocity_step_fraction <= 1.0,
            "numerics: velocity_step_fraction must be in (0, 1]");
    require(velocity_span_sigmas >= 4.0,
            "numerics: velocity_span_sigmas must be >= 4");
    require(velocity_max_nodes >= 1000,
            "numerics: velocity_max_nodes must be >= 1000");
    require(scan_points >= 2, "numerics: scan_points must be >= 2");
    require(scan_span > 0.0, "numerics: scan_span must be > 0");
    require(periods >= 1, "numerics: periods must be >= 1");
    require(samples_per_period >= 16,
            "numerics: samples_per_period must be >= 16");
    require(std::isfinite(lock_offset), "numerics: lock_offset must be finite");
    require(gamma_eit >= 0.0, "numerics: gamma_eit must be >= 0");
    require(obe_dt_safety > 0.0 && obe_dt_safety <= 0.2,
            "numerics: obe_dt_safety must be in (0, 0.2]");
    require(obe_detuning_cap > 0.0, "numerics: obe_detuning_cap must be > 0");
    require(obe_max_total_steps >= 1000,
            "numerics: obe_max_total_steps must be >= 1000");
    require(warmup_periods >= 0, "numerics: warmup_periods must be >= 0");
}

void KerrConfig::validate() const {
    require(field_min > 0.0, "kerr: field_min must be > 0");
    require(field_max > field_min, "kerr: field_max must exceed field_min");
    require(points >= 6, "kerr: points must be >= 6");
}

std::vector<double> KerrConfig::field_grid() const {
    validate();
    std::vector<double> grid(points);
    for (int i = 0; i < points; ++i) {
        grid[i] = field_min + (field_max - field_min) * static_cast<double>(i) /
                                  static_cast<double>(points - 1);
    }
    return grid;
}

void ScalingConfig::validate() const {
    // The downstream power-law fit needs 4 points for its error estimate.
    require(n_values.size() >= 4, "scaling: need at least 4 n values");
    for (std::size_t i = 1; i < n_values.size(); ++i) {
        require(n_values[i] > n_values[i - 1],
                "scaling: n values must be strictly increasing");
    }
    require(width_exponent >= 1.0 && width_exponent <= 1.5,
            "scaling: width_exponent must be in [1, 1.5]");
}

void BandwidthConfig::validate() const {
    require(frequencies.size() >= 4, "bandwidth: need at least 4 frequencies");
    double prev = 0.0;
    for (double f : frequencies) {
        require(f > prev, "bandwidth: frequencies must be positive and increasing");
        prev = f;
    }
}

void ExperimentConfig::validate() const {
    ladder.validate();
    cell.validate();
    probe.validate();
    coupling.validate();
    rydberg.validate();
    drive.validate();
    numerics.validate();
    kerr.validate();
    scaling.validate();
    bandwidth.validate();
}

ModelContext build_context(const ExperimentConfig& cfg) {
    cfg.validate();
    ModelContext ctx;
    ctx.cfg = cfg;

    const double n_star_ref =
        effective_quantum_number(cfg.rydberg.n_ref, cfg.rydberg.quantum_defect);
    ctx.level = make_rydberg_level(cfg.rydberg.n, cfg.rydberg.quantum_defect,
                                   cfg.rydberg.alpha_ref, n_star_ref);
    ctx.dipole_coupling = scaled_coupling_dipole(
        cfg.ladder.dipole_coupling_ref, n_star_ref, ctx.level.n_star);

    ctx.omega_p =
        rabi_frequency(cfg.probe.power, cfg.probe.waist, cfg.ladder.dipole_probe);
    ctx.omega_c =
        rabi_frequency(cfg.coupling.power, cfg.coupling.waist, ctx.dipole_coupling);
    ctx.density = vapor_number_density(cfg.cell);
    ctx.geometry = cfg.probe.propagation_sign * cfg.coupling.propagation_sign < 0
                       ? BeamGeometry::counter_propagating
                       : BeamGeometry::co_propagating;

    ctx.grid.step_fraction = cfg.numerics.velocity_step_fraction;
    ctx.grid.span_sigmas = cfg.numerics.velocity_span_sigmas;
    ctx.grid.tolerance = cfg.numerics.quadrature_tol;
    ctx.grid.max_nodes = cfg.numerics.velocity_max_nodes;
    return ctx;
}

ModelContext rebuild_for_n(const ModelContext& ctx, int n) {
    ExperimentConfig cfg = ctx.cfg;
    cfg.rydberg.n = n;
    return build_context(cfg);
}

}  // namespace rydeo
