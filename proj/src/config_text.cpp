#include <cerrno>
#include <climits>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <vector>

#include "rydeo/config.hpp"
#include "rydeo/errors.hpp"

namespace rydeo {

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& text, const std::string& where) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0' || errno == ERANGE) {
        throw ValidationError("config: bad number '" + text + "' for " + where);
    }
    return v;
}

long parse_long(const std::string& text, const std::string& where) {
    errno = 0;
    char* end = nullptr;
    const long v = std::strtol(text.c_str(), &end, 10);
    if (end == text.c_str() || *end != '\0' || errno == ERANGE) {
        throw ValidationError("config: bad integer '" + text + "' for " + where);
    }
    return v;
}

int parse_int(const std::string& text, const std::string& where) {
    const long v = parse_long(text, where);
    if (v < INT_MIN || v > INT_MAX) {
        throw ValidationError("config: integer out of range for " + where);
    }
    return static_cast<int>(v);
}

bool parse_bool(const std::string& text, const std::string& where) {
    if (text == "true") return true;
    if (text == "false") return false;
    throw ValidationError("config: bad boolean '" + text + "' for " + where +
                          " (expected true or false)");
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <typename T>
std::string join_list(const std::vector<T>& values,
                      const std::function<std::string(T)>& fmt) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ",";
        out += fmt(values[i]);
    }
    return out;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream is(text);
    while (std::getline(is, item, ',')) parts.push_back(trim(item));
    return parts;
}

struct KeyHandler {
    std::string section;
    std::string key;
    std::function<void(ExperimentConfig&, const std::string&)> set;
    // nullopt = omit the line from the canonical dump
    std::function<std::optional<std::string>(const ExperimentConfig&)> get;
};

#define SCALAR_KEY(sec, name, field, parser)                                   \
    KeyHandler {                                                               \
        sec, name,                                                             \
            [](ExperimentConfig& c, const std::string& v) {                    \
                c.field = parser(v, sec "." name);                             \
            },                                                                 \
            [](const ExperimentConfig& c) -> std::optional<std::string> {      \
                return format_double(static_cast<double>(c.field));            \
            }                                                                  \
    }

#define DOUBLE_KEY(sec, name, field) SCALAR_KEY(sec, name, field, parse_double)

#define INT_KEY(sec, name, field)                                              \
    KeyHandler {                                                               \
        sec, name,                                                             \
            [](ExperimentConfig& c, const std::string& v) {                    \
                c.field = parse_int(v, sec "." name);                          \
            },                                                                 \
            [](const ExperimentConfig& c) -> std::optional<std::string> {      \
                return std::to_string(c.field);                                \
            }                                                                  \
    }

#define LONG_KEY(sec, name, field)                                             \
    KeyHandler {                                                               \
        sec, name,                                                             \
            [](ExperimentConfig& c, const std::string& v) {                    \
                c.field = parse_long(v, sec "." name);                         \
            },                                                                 \
            [](const ExperimentConfig& c) -> std::optional<std::string> {      \
                return std::to_string(c.field);                                \
            }                                                                  \
    }

#define BOOL_KEY(sec, name, field)                                             \
    KeyHandler {                                                               \
        sec, name,                                                             \
            [](ExperimentConfig& c, const std::string& v) {                    \
                c.field = parse_bool(v, sec "." name);                         \
            },                                                                 \
            [](const ExperimentConfig& c) -> std::optional<std::string> {      \
                return c.field ? "true" : "false";                             \
            }                                                                  \
    }

const std::vector<KeyHandler>& registry() {
    static const std::vector<KeyHandler> handlers = {
        DOUBLE_KEY("ladder", "probe_wavelength_m", ladder.probe_wavelength),
        DOUBLE_KEY("ladder", "coupling_wavelength_m", ladder.coupling_wavelength),
        DOUBLE_KEY("ladder", "gamma2_rad_s", ladder.gamma2),
        DOUBLE_KEY("ladder", "gamma3_rad_s", ladder.gamma3),
        DOUBLE_KEY("ladder", "deph12_rad_s", ladder.deph12),
        DOUBLE_KEY("ladder", "deph13_rad_s", ladder.deph13),
        DOUBLE_KEY("ladder", "atomic_mass_kg", ladder.atomic_mass),
        DOUBLE_KEY("ladder", "dipole_probe_cm", ladder.dipole_probe),
        DOUBLE_KEY("ladder", "dipole_coupling_ref_cm", ladder.dipole_coupling_ref),
        DOUBLE_KEY("cell", "length_m", cell.length),
        DOUBLE_KEY("cell", "temperature_k", cell.temperature),
        KeyHandler{"cell", "density_override_m3",
                   [](ExperimentConfig& c, const std::string& v) {
                       c.cell.density_override =
                           parse_double(v, "cell.density_override_m3");
                   },
                   [](const ExperimentConfig& c) -> std::optional<std::string> {
                       if (!c.cell.density_override) return std::nullopt;
                       return format_double(*c.cell.density_override);
                   }},
        DOUBLE_KEY("probe", "power_w", probe.power),
        DOUBLE_KEY("probe", "waist_m", probe.waist),
        DOUBLE_KEY("probe", "detuning_rad_s", probe.detuning),
        INT_KEY("probe", "propagation_sign", probe.propagation_sign),
        DOUBLE_KEY("coupling", "power_w", coupling.power),
        DOUBLE_KEY("coupling", "waist_m", coupling.waist),
        DOUBLE_KEY("coupling", "detuning_rad_s", coupling.detuning),
        INT_KEY("coupling", "propagation_sign", coupling.propagation_sign),
        INT_KEY("rydberg", "n", rydberg.n),
        DOUBLE_KEY("rydberg", "quantum_defect", rydberg.quantum_defect),
        INT_KEY("rydberg", "n_ref", rydberg.n_ref),
        DOUBLE_KEY("rydberg", "alpha_ref", rydberg.alpha_ref),
        DOUBLE_KEY("drive", "e_dc_v_m", drive.e_dc),
        DOUBLE_KEY("drive", "e_ac_v_m", drive.e_ac),
        DOUBLE_KEY("drive", "frequency_hz", drive.frequency),
        DOUBLE_KEY("numerics", "quadrature_tol", numerics.quadrature_tol),
        DOUBLE_KEY("numerics", "velocity_step_fraction",
                   numerics.velocity_step_fraction),
        DOUBLE_KEY("numerics", "velocity_span_sigmas",
                   numerics.velocity_span_sigmas),
        LONG_KEY("numerics", "velocity_max_nodes", numerics.velocity_max_nodes),
        INT_KEY("numerics", "scan_points", numerics.scan_points),
        DOUBLE_KEY("numerics", "scan_span_rad_s", numerics.scan_span),
        KeyHandler{"numerics", "mode",
                   [](ExperimentConfig& c, const std::string& v) {
                       c.numerics.mode = response_mode_from_string(v);
                   },
                   [](const ExperimentConfig& c) -> std::optional<std::string> {
                       return to_string(c.numerics.mode);
                   }},
        INT_KEY("numerics", "periods", numerics.periods),
        INT_KEY("numerics", "samples_per_period", numerics.samples_per_period),
        BOOL_KEY("numerics", "lock_offset_auto", numerics.lock_offset_auto),
        DOUBLE_KEY("numerics", "lock_offset_rad_s", numerics.lock_offset),
        DOUBLE_KEY("numerics", "gamma_eit_rad_s", numerics.gamma_eit),
        DOUBLE_KEY("numerics", "obe_dt_safety", numerics.obe_dt_safety),
        DOUBLE_KEY("numerics", "obe_detuning_cap_rad_s",
                   numerics.obe_detuning_cap),
        LONG_KEY("numerics", "obe_max_total_steps", numerics.obe_max_total_steps),
        INT_KEY("numerics", "warmup_periods", numerics.warmup_periods),
        DOUBLE_KEY("kerr", "field_min_v_m", kerr.field_min),
        DOUBLE_KEY("kerr", "field_max_v_m", kerr.field_max),
        INT_KEY("kerr", "points", kerr.points),
        KeyHandler{"scaling", "n_values",
                   [](ExperimentConfig& c, const std::string& v) {
                       std::vector<int> values;
                       for (const std::string& item : split_list(v)) {
                           values.push_back(parse_int(item, "scaling.n_values"));
                       }
                       c.scaling.n_values = values;
                   },
                   [](const ExperimentConfig& c) -> std::optional<std::string> {
                       return join_list<int>(c.scaling.n_values, [](int n) {
                           return std::to_string(n);
                       });
                   }},
        DOUBLE_KEY("scaling", "width_exponent", scaling.width_exponent),
        KeyHandler{"bandwidth", "frequencies_hz",
                   [](ExperimentConfig& c, const std::string& v) {
                       std::vector<double> values;
                       for (const std::string& item : split_list(v)) {
                           values.push_back(
                               parse_double(item, "bandwidth.frequencies_hz"));
                       }
                       c.bandwidth.frequencies = values;
                   },
                   [](const ExperimentConfig& c) -> std::optional<std::string> {
                       return join_list<double>(c.bandwidth.frequencies,
                                                format_double);
                   }},
    };
    return handlers;
}

#undef SCALAR_KEY
#undef DOUBLE_KEY
#undef INT_KEY
#undef LONG_KEY
#undef BOOL_KEY

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream is(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ValidationError("config line " + std::to_string(line_no) +
                                      ": malformed section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            bool known = false;
            for (const KeyHandler& h : registry()) {
                if (h.section == section) {
                    known = true;
                    break;
                }
            }
            if (!known) {
                throw ValidationError("config line " + std::to_string(line_no) +
                                      ": unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("config line " + std::to_string(line_no) +
                                  ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) {
            throw ValidationError("config line " + std::to_string(line_no) +
                                  ": key outside any section");
        }
        bool handled = false;
        for (const KeyHandler& h : registry()) {
            if (h.section == section && h.key == key) {
                h.set(cfg, value);
                handled = true;
                break;
            }
        }
        if (!handled) {
            throw ValidationError("config line " + std::to_string(line_no) +
                                  ": unknown key '" + key + "' in section [" +
                                  section + "]");
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

std::string canonical_config_text(const ExperimentConfig& cfg) {
    std::ostringstream os;
    std::string section;
    for (const KeyHandler& h : registry()) {
        const std::optional<std::string> value = h.get(cfg);
        if (!value) continue;
        if (h.section != section) {
            if (!section.empty()) os << "\n";
            os << "[" << h.section << "]\n";
            section = h.section;
        }
        os << h.key << " = " << *value << "\n";
    }
    return os.str();
}

}  // namespace rydeo
