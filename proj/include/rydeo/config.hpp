#pragma once

#include <string>
#include <vector>

#include "rydeo/atomic_data.hpp"
#include "rydeo/doppler.hpp"
#include "rydeo/rydberg.hpp"

namespace rydeo {

enum class ResponseMode { quasi_static, filtered, full_obe };

std::string to_string(ResponseMode mode);
ResponseMode response_mode_from_string(const std::string& text);

// External low-frequency field E(t) = e_dc + e_ac sin(2 pi f t).
struct FieldDrive {
    double e_dc = 0.0;        // V/m
    double e_ac = 0.0;        // V/m
    double frequency = 1e4;   // Hz

    double field_at(double t) const;
    double mean_square_field() const;  // <E^2> over one period
    double max_abs_field() const { return std::abs(e_dc) + e_ac; }

    void validate() const;
};

struct RydbergConfig {
    int n = 32;
    double quantum_defect = 3.13;
    int n_ref = 32;
    double alpha_ref = 942.4778;   // rad/s per (V/m)^2 at n_ref
    void validate() const;
};

struct NumericsConfig {
    // velocity average
    double quadrature_tol = 1e-6;
    double velocity_step_fraction = 0.25;
    double velocity_span_sigmas = 8.0;
    long velocity_max_nodes = 2'000'000;
    // scans
    int scan_points = 201;
    double scan_span = 2.5132741228718345e8;  // rad/s, full width (2 pi 40 MHz)
    // time traces
    ResponseMode mode = ResponseMode::quasi_static;
    int periods = 4;
    int samples_per_period = 256;
    bool lock_offset_auto = true;
    double lock_offset = 0.0;      // rad/s, used when lock_offset_auto = false
    double gamma_eit = 0.0;        // rad/s; 0 = measure from a scan
    // integrator
    double obe_dt_safety = 0.05;
    double obe_detuning_cap = 2.5132741228718345e8;  // rad/s (2 pi 40 MHz)
    long obe_max_total_steps = 600'000'000;
    int warmup_periods = 0;        // 0 = choose from gamma2 and the period

    void validate() const;
};

struct KerrConfig {
    double field_min = 20.0;   // V/m
    double field_max = 600.0;  // V/m
    int points = 25;
    void validate() const;
    std::vector<double> field_grid() const;
};

struct ScalingConfig {
    std::vector<int> n_values{28, 33, 38, 43, 48};
    // Expected width-scaling exponent (window FWHM ~ n*^-w) used for the
    // ingredient prediction 7 - 3 + w that the simulated Kerr exponent is
    // compared against.
    double width_exponent = 1.2;
    void validate() const;
};

struct BandwidthConfig {
    std::vector<double> frequencies{2.5e5, 5e5, 1e6, 2e6, 4e6, 8e6};  // Hz
    void validate() const;
};

struct ExperimentConfig {
    LadderSystem ladder = rb85_ladder();
    CellConfig cell;
    BeamConfig probe;
    BeamConfig coupling;
    RydbergConfig rydberg;
    FieldDrive drive;
    NumericsConfig numerics;
    KerrConfig kerr;
    ScalingConfig scaling;
    BandwidthConfig bandwidth;

    void validate() const;
};

// Everything derived from a validated config that the physics layers consume.
struct ModelContext {
    ExperimentConfig cfg;
    RydbergLevel level;
    double dipole_coupling = 0.0;  // C m, scaled to level.n_star
    double omega_p = 0.0;          // rad/s
    double omega_c = 0.0;          // rad/s
    double density = 0.0;          // m^-3
    BeamGeometry geometry = BeamGeometry::counter_propagating;
    VelocityGridSpec grid;

    const LadderSystem& system() const { return cfg.ladder; }
    DetuningPoint beam_detunings() const {
        return DetuningPoint{cfg.probe.detuning, cfg.coupling.detuning, 0.0};
    }
};

ModelContext build_context(const ExperimentConfig& cfg);

// Re-derive the Rydberg-level-dependent parts for a different n (scaling runs).
ModelContext rebuild_for_n(const ModelContext& ctx, int n);

// INI-style round trip. load_config rejects unknown sections and keys; the
// canonical text reproduces the config bit for bit when re-parsed.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string canonical_config_text(const ExperimentConfig& cfg);

}  // namespace rydeo
