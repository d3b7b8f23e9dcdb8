#include <complex>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rydeo/analysis.hpp"
#include "rydeo/constants.hpp"
#include "rydeo/errors.hpp"
#include "rydeo/io.hpp"
#include "rydeo/medium.hpp"
#include "rydeo/modulation.hpp"
#include "rydeo/spectra.hpp"
#include "rydeo/svg.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace rydeo;

namespace {

struct Options {
    std::string config_path;
    std::string out_dir = "out";
    std::string format = "both";
    bool want_svg = false;
    std::string mode;  // empty = keep the config's mode
    long seed = 0;
    int points = 0;    // scan only; 0 = keep the config's value
    std::string axis = "coupling";
};

void add_common(CLI::App* cmd, Options& opt) {
    cmd->add_option("--config", opt.config_path, "Config file (INI-style)")
        ->required();
    cmd->add_option("--out", opt.out_dir, "Output directory");
    cmd->add_option("--format", opt.format, "csv|json|both")
        ->check(CLI::IsMember({"csv", "json", "both"}));
    cmd->add_flag("--svg", opt.want_svg, "Also write SVG plots");
    cmd->add_option("--mode", opt.mode, "quasi-static|filtered|full-obe")
        ->check(CLI::IsMember({"quasi-static", "filtered", "full-obe"}));
    cmd->add_option("--seed", opt.seed,
                    "Recorded in outputs; pipelines are deterministic");
}

struct Sink {
    fs::path dir;
    bool csv = true;
    bool json = true;
    bool svg = false;

    void put(const std::string& name, const std::string& content) const {
        io::write_file((dir / name).string(), content);
    }
};

Sink make_sink(const Options& opt) {
    Sink sink;
    sink.dir = opt.out_dir;
    sink.csv = opt.format != "json";
    sink.json = opt.format != "csv";
    sink.svg = opt.want_svg;
    fs::create_directories(sink.dir);
    return sink;
}

ExperimentConfig load_with_overrides(const Options& opt) {
    ExperimentConfig cfg = load_config(opt.config_path);
    if (!opt.mode.empty()) {
        cfg.numerics.mode = response_mode_from_string(opt.mode);
    }
    if (opt.points != 0) cfg.numerics.scan_points = opt.points;
    cfg.validate();
    return cfg;
}

std::vector<double> scaled(const std::vector<double>& v, double factor) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] * factor;
    return out;
}

void run_scan(const Options& opt) {
    const ExperimentConfig cfg = load_with_overrides(opt);
    const ModelContext ctx = build_context(cfg);
    const ScanAxis axis =
        opt.axis == "probe" ? ScanAxis::probe : ScanAxis::coupling;
    const ScanTrace trace = eit_scan(ctx, axis);
    const ResonanceSummary summary =
        summarize_resonance(trace, 1e-6, axis == ScanAxis::probe);

    const Sink sink = make_sink(opt);
    const std::vector<double> detuning_hz =
        scaled(trace.detuning, 1.0 / constants::two_pi);
    if (sink.csv) {
        sink.put("scan.csv", io::csv_document(cfg, {{"detuning_hz", &detuning_hz},
                                                    {"transmission", &trace.transmission},
                                                    {"phase_rad", &trace.phase}}));
    }
    if (sink.json) {
        ordered_json doc = io::json_envelope(cfg, "scan", opt.seed);
        doc["results"] = io::scan_summary_json(trace, summary);
        sink.put("scan.json", doc.dump(2) + "\n");
    }
    if (sink.svg) {
        sink.put("scan_transmission.svg",
                 svg::line_plot("Transmission vs detuning", "detuning (Hz)",
                                "transmission",
                                {{"", "#1f77b4", &detuning_hz, &trace.transmission}}));
        sink.put("scan_phase.svg",
                 svg::line_plot("Phase vs detuning", "detuning (Hz)",
                                "phase (rad)",
                                {{"", "#d62728", &detuning_hz, &trace.phase}}));
    }
}

void run_modulate(const Options& opt) {
    const ExperimentConfig cfg = load_with_overrides(opt);
    const ModelContext ctx = build_context(cfg);
    const TimeTrace trace = modulated_response(ctx);
    const int max_order = std::min(8, trace.samples_per_period / 2 - 1);
    const HarmonicSpectrum ht =
        harmonics(trace.transmission, trace.sample_dt(), trace.nu_m, max_order);
    const HarmonicSpectrum hp =
        harmonics(trace.phase, trace.sample_dt(), trace.nu_m, max_order);

    const Sink sink = make_sink(opt);
    if (sink.csv) {
        sink.put("modulate.csv",
                 io::csv_document(cfg, {{"t_s", &trace.time},
                                        {"field_v_per_m", &trace.field},
                                        {"transmission", &trace.transmission},
                                        {"phase_rad", &trace.phase}}));
    }
    if (sink.json) {
        ordered_json doc = io::json_envelope(cfg, "modulate", opt.seed);
        doc["results"] = io::harmonics_json(ht, hp, trace);
        sink.put("modulate.json", doc.dump(2) + "\n");
    }
    if (sink.svg) {
        sink.put("modulate_transmission.svg",
                 svg::line_plot("Transmission vs time", "t (s)", "transmission",
                                {{"", "#1f77b4", &trace.time, &trace.transmission}}));
        sink.put("modulate_phase.svg",
                 svg::line_plot("Phase vs time", "t (s)", "phase (rad)",
                                {{"", "#d62728", &trace.time, &trace.phase}}));
    }
}

void run_sidebands(const Options& opt) {
    const ExperimentConfig cfg = load_with_overrides(opt);
    const ModelContext ctx = build_context(cfg);
    const TimeTrace trace = modulated_response(ctx);
    const ComplexTrace field = output_field(trace);
    const double sample_rate = 1.0 / trace.sample_dt();
    const SidebandSpectrum spectrum =
        sideband_spectrum(field.amplitude, sample_rate, trace.nu_m, 4);

    const Sink sink = make_sink(opt);
    if (sink.csv) {
        sink.put("sidebands.csv",
                 io::csv_document(cfg, {{"freq_hz", &spectrum.frequency},
                                        {"power_db", &spectrum.power_db}}));
    }
    if (sink.json) {
        ordered_json doc = io::json_envelope(cfg, "sidebands", opt.seed);
        doc["results"] = io::sidebands_json(spectrum);
        doc["results"]["mode"] = to_string(trace.mode);
        doc["results"]["lock_offset_rad_s"] = trace.lock_offset;
        sink.put("sidebands.json", doc.dump(2) + "\n");
    }
    if (sink.svg) {
        sink.put("sidebands.svg",
                 svg::line_plot("Output power spectrum", "offset from carrier (Hz)",
                                "power (dB rel carrier)",
                                {{"", "#1f77b4", &spectrum.frequency,
                                  &spectrum.power_db}}));
    }
}

void run_kerr(const Options& opt) {
    const ExperimentConfig cfg = load_with_overrides(opt);
    const ModelContext ctx = build_context(cfg);
    const std::vector<KerrSample> samples = kerr_field_sweep(ctx);
    const KerrFitResult fit = fit_phase_vs_field(samples, cfg.cell.length);

    const Sink sink = make_sink(opt);
    std::vector<double> field(samples.size()), dphi(samples.size()),
        model(samples.size()), resid(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        field[i] = samples[i].field;
        dphi[i] = samples[i].delta_phi;
        const double e2 = field[i] * field[i];
        model[i] = fit.a * e2 / (1.0 + fit.b * e2 * e2);
        resid[i] = dphi[i] - model[i];
    }
    if (sink.csv) {
        sink.put("kerr.csv", io::csv_document(cfg, {{"field_v_per_m", &field},
                                                    {"delta_phi_rad", &dphi},
                                                    {"model_rad", &model},
                                                    {"residual_rad", &resid}}));
    }
    if (sink.json) {
        ordered_json doc = io::json_envelope(cfg, "kerr", opt.seed);
        doc["results"] = io::kerr_json(samples, fit);
        sink.put("kerr.json", doc.dump(2) + "\n");
    }
    if (sink.svg) {
        sink.put("kerr.svg",
                 svg::line_plot("Kerr phase vs field", "field (V/m)",
                                "phase shift (rad)",
                                {{"data", "#1f77b4", &field, &dphi},
                                 {"fit", "#d62728", &field, &model}}));
    }
}

void run_scaling(const Options& opt) {
    const ExperimentConfig cfg = load_with_overrides(opt);
    const ModelContext ctx = build_context(cfg);
    const ScalingSweep sweep = scaling_sweep(ctx);

    const Sink sink = make_sink(opt);
    std::vector<double> n(sweep.points.size()), n_star(sweep.points.size()),
        b0(sweep.points.size()), fwhm_hz(sweep.points.size());
    for (std::size_t i = 0; i < sweep.points.size(); ++i) {
        n[i] = sweep.points[i].n;
        n_star[i] = sweep.points[i].n_star;
        b0[i] = sweep.points[i].b0;
        fwhm_hz[i] = sweep.points[i].fwhm / constants::two_pi;
    }
    if (sink.csv) {
        sink.put("scaling.csv",
                 io::csv_document(cfg, {{"n", &n},
                                        {"n_star", &n_star},
                                        {"b0_m_per_v2", &b0},
                                        {"fwhm_hz", &fwhm_hz}}));
    }
    if (sink.json) {
        ordered_json doc = io::json_envelope(cfg, "scaling", opt.seed);
        doc["results"] = io::scaling_json(sweep);
        sink.put("scaling.json", doc.dump(2) + "\n");
    }
    if (sink.svg) {
        std::vector<double> log_n(n_star.size()), log_b0(b0.size());
        for (std::size_t i = 0; i < n_star.size(); ++i) {
            log_n[i] = std::log10(n_star[i]);
            log_b0[i] = std::log10(b0[i]);
        }
        sink.put("scaling.svg",
                 svg::line_plot("Kerr coefficient scaling", "log10 n*",
                                "log10 b0 (m/V^2)",
                                {{"", "#1f77b4", &log_n, &log_b0}}));
    }
}

void run_bandwidth(const Options& opt) {
    const ExperimentConfig cfg = load_with_overrides(opt);
    const ModelContext ctx = build_context(cfg);
    const BandwidthCurve curve =
        bandwidth_curve(ctx, cfg.bandwidth.frequencies, cfg.numerics.mode);

    const Sink sink = make_sink(opt);
    std::vector<double> nu(curve.points.size()), ratio(curve.points.size());
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        nu[i] = curve.points[i].nu_m;
        ratio[i] = curve.points[i].ratio;
    }
    if (sink.csv) {
        sink.put("bandwidth.csv",
                 io::csv_document(cfg, {{"nu_m_hz", &nu}, {"ratio2", &ratio}}));
    }
    if (sink.json) {
        ordered_json doc = io::json_envelope(cfg, "bandwidth", opt.seed);
        doc["results"] = io::bandwidth_json(curve);
        sink.put("bandwidth.json", doc.dump(2) + "\n");
    }
    if (sink.svg) {
        sink.put("bandwidth.svg",
                 svg::line_plot("2nd-order sideband ratio vs drive frequency",
                                "nu_m (Hz)", "sideband/carrier power",
                                {{"", "#1f77b4", &nu, &ratio}}));
    }
}

void emit_error(const std::string& type, const std::string& message) {
    ordered_json j;
    j["error"] = {{"type", type}, {"message", message}};
    std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rydberg-EIT vapor response toolkit"};
    app.require_subcommand(1);

    Options opt;
    CLI::App* scan = app.add_subcommand("scan", "Detuning scan of the medium");
    add_common(scan, opt);
    scan->add_option("--points", opt.points, "Scan points (minimum 11)");
    scan->add_option("--axis", opt.axis, "probe|coupling")
        ->check(CLI::IsMember({"probe", "coupling"}));
    CLI::App* modulate =
        app.add_subcommand("modulate", "Time response to the periodic drive");
    add_common(modulate, opt);
    CLI::App* sidebands =
        app.add_subcommand("sidebands", "Optical output spectrum");
    add_common(sidebands, opt);
    CLI::App* kerr = app.add_subcommand("kerr", "Static-field phase sweep + fit");
    add_common(kerr, opt);
    CLI::App* scaling =
        app.add_subcommand("scaling", "Kerr pipeline across principal numbers");
    add_common(scaling, opt);
    CLI::App* bandwidth =
        app.add_subcommand("bandwidth", "Sideband ratio vs drive frequency");
    add_common(bandwidth, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        emit_error("validation", e.what());
        return 2;
    }

    try {
        if (scan->parsed()) run_scan(opt);
        else if (modulate->parsed()) run_modulate(opt);
        else if (sidebands->parsed()) run_sidebands(opt);
        else if (kerr->parsed()) run_kerr(opt);
        else if (scaling->parsed()) run_scaling(opt);
        else if (bandwidth->parsed()) run_bandwidth(opt);
    } catch (const ValidationError& e) {
        emit_error("validation", e.what());
        return 2;
    } catch (const NumericalError& e) {
        emit_error("numerical", e.what());
        return 3;
    } catch (const std::exception& e) {
        emit_error("internal", e.what());
        return 1;
    }
    return 0;
}
