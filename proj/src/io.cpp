#include "rydeo/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "rydeo/constants.hpp"
#include "rydeo/errors.hpp"

namespace rydeo::io {

using nlohmann::ordered_json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_document(const ExperimentConfig& cfg,
                         const std::vector<CsvColumn>& columns) {
    std::ostringstream out;
    out << "# schema_version: " << schema_version << "\n";
    std::istringstream snapshot(canonical_config_text(cfg));
    for (std::string line; std::getline(snapshot, line);) {
        out << "# " << line << "\n";
    }

    std::size_t rows = 0;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out << ',';
        out << columns[i].name;
        rows = std::max(rows, columns[i].values->size());
    }
    out << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i].values->size() != rows) {
            throw ValidationError("csv columns have unequal lengths");
        }
    }
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (i) out << ',';
            out << format_double((*columns[i].values)[r]);
        }
        out << '\n';
    }
    return out.str();
}

ordered_json json_envelope(const ExperimentConfig& cfg,
                           const std::string& subcommand, long seed) {
    ordered_json j;
    j["schema_version"] = schema_version;
    j["subcommand"] = subcommand;
    j["seed"] = seed;
    j["config_text"] = canonical_config_text(cfg);
    return j;
}

ordered_json scan_summary_json(const ScanTrace& trace,
                               const ResonanceSummary& summary) {
    ordered_json j;
    j["axis"] = to_string(trace.axis);
    j["points"] = trace.detuning.size();
    j["center_hz"] = summary.center / constants::two_pi;
    j["fwhm_hz"] = summary.fwhm / constants::two_pi;
    j["contrast"] = summary.contrast;
    j["max_dispersion_slope_rad_per_rad_s"] = summary.max_dispersion_slope;
    j["fit_residual_rms"] = summary.fit_residual_rms;
    return j;
}

static ordered_json harmonic_table(const HarmonicSpectrum& h) {
    ordered_json j;
    j["base_frequency_hz"] = h.base_frequency;
    j["orders"] = h.orders;
    j["amplitude"] = h.amplitude;
    j["phase_rad"] = h.phase;
    return j;
}

ordered_json harmonics_json(const HarmonicSpectrum& transmission,
                            const HarmonicSpectrum& phase,
                            const TimeTrace& trace) {
    ordered_json j;
    j["mode"] = to_string(trace.mode);
    j["drive_frequency_hz"] = trace.nu_m;
    j["periods"] = trace.periods;
    j["samples_per_period"] = trace.samples_per_period;
    j["lock_offset_rad_s"] = trace.lock_offset;
    if (trace.gamma_eit > 0.0) j["gamma_eit_rad_s"] = trace.gamma_eit;
    j["transmission"] = harmonic_table(transmission);
    j["phase"] = harmonic_table(phase);
    return j;
}

ordered_json sidebands_json(const SidebandSpectrum& spectrum) {
    ordered_json j;
    j["carrier_frequency_hz"] = spectrum.carrier_frequency;
    j["bins"] = spectrum.frequency.size();
    ordered_json ratios = ordered_json::array();
    for (const auto& p : spectrum.order_ratios) {
        ratios.push_back({{"order", p.order}, {"ratio", p.ratio}});
    }
    j["order_ratios"] = ratios;
    return j;
}

ordered_json kerr_json(const std::vector<KerrSample>& samples,
                       const KerrFitResult& fit) {
    ordered_json j;
    j["a_rad_per_v2_m2"] = fit.a;
    j["b_per_v4_m4"] = fit.b;
    j["e_max_v_per_m"] = fit.e_max;
    j["phi_max_rad"] = fit.phi_max;
    j["b0_m_per_v2"] = fit.b0;
    j["length_m"] = fit.length;
    j["residual_norm"] = fit.residual_norm;
    j["pre_maximum_only"] = fit.pre_maximum_only;
    j["iterations"] = fit.iterations;
    ordered_json pts = ordered_json::array();
    for (const auto& s : samples) {
        const double model =
            fit.a * s.field * s.field /
            (1.0 + fit.b * s.field * s.field * s.field * s.field);
        pts.push_back({{"field_v_per_m", s.field},
                       {"delta_phi_rad", s.delta_phi},
                       {"model_rad", model},
                       {"residual_rad", s.delta_phi - model}});
    }
    j["points"] = pts;
    return j;
}

ordered_json scaling_json(const ScalingSweep& sweep) {
    ordered_json j;
    ordered_json pts = ordered_json::array();
    for (const auto& p : sweep.points) {
        pts.push_back({{"n", p.n},
                       {"n_star", p.n_star},
                       {"b0_m_per_v2", p.b0},
                       {"fwhm_hz", p.fwhm / constants::two_pi}});
    }
    j["points"] = pts;
    j["kerr_exponent"] = sweep.kerr_fit.exponent;
    j["kerr_exponent_stderr"] = sweep.kerr_fit.exponent_stderr;
    j["fitted_width_exponent"] = -sweep.width_fit.exponent;
    j["predicted_kerr_exponent"] = sweep.predicted_exponent;
    j["kerr_fit_residuals"] = sweep.kerr_fit.residuals;
    j["width_fit_residuals"] = sweep.width_fit.residuals;
    return j;
}

ordered_json bandwidth_json(const BandwidthCurve& curve) {
    ordered_json j;
    ordered_json pts = ordered_json::array();
    for (const auto& p : curve.points) {
        pts.push_back({{"nu_m_hz", p.nu_m}, {"ratio2", p.ratio}});
    }
    j["points"] = pts;
    j["fitted_fwhm_hz"] = curve.fitted_fwhm_hz;
    j["plateau_ratio"] = curve.plateau_ratio;
    j["fit_residual_rms"] = curve.fit_residual_rms;
    return j;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open for writing: " + path);
    out << content;
    if (!out) throw Error("write failed: " + path);
}

}  // namespace rydeo::io
