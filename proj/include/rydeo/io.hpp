#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "rydeo/analysis.hpp"
#include "rydeo/config.hpp"
#include "rydeo/medium.hpp"
#include "rydeo/modulation.hpp"
#include "rydeo/spectra.hpp"

namespace rydeo::io {

inline constexpr const char* schema_version = "1";

// Full-precision round-trippable number formatting shared by all writers.
std::string format_double(double v);

struct CsvColumn {
    std::string name;
    const std::vector<double>* values = nullptr;
};

// CSV with the canonical config snapshot embedded as leading '#' comment
// lines; loading those lines (stripped of '# ') reproduces the run.
std::string csv_document(const ExperimentConfig& cfg,
                         const std::vector<CsvColumn>& columns);

// Common JSON envelope: schema version, subcommand, seed, config snapshot.
nlohmann::ordered_json json_envelope(const ExperimentConfig& cfg,
                                     const std::string& subcommand, long seed);

nlohmann::ordered_json scan_summary_json(const ScanTrace& trace,
                                         const ResonanceSummary& summary);
nlohmann::ordered_json harmonics_json(const HarmonicSpectrum& transmission,
                                      const HarmonicSpectrum& phase,
                                      const TimeTrace& trace);
nlohmann::ordered_json sidebands_json(const SidebandSpectrum& spectrum);
nlohmann::ordered_json kerr_json(const std::vector<KerrSample>& samples,
                                 const KerrFitResult& fit);
nlohmann::ordered_json scaling_json(const ScalingSweep& sweep);
nlohmann::ordered_json bandwidth_json(const BandwidthCurve& curve);

void write_file(const std::string& path, const std::string& content);

}  // namespace rydeo::io
