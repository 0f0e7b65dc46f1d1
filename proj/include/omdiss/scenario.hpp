#pragma once

/**
 * @file scenario.hpp
 * @brief Scenario files: a sectioned key = value text format.
 *
 * Frequencies and rates are written in Hz and converted to rad/s once, in
 * resolve(). Times in [dynamics] are in microseconds. Example:
 *
 *     [task]
 *     kind = sweep
 *     name = entanglement_map
 *
 *     [params]
 *     n_m = 250
 *
 *     [drive]
 *     case = anti_stokes_blue
 *     G_m_hz = 50e3
 *
 *     [sweep]
 *     observable = E_N
 *     axis1 = G_b_hz 0 10e6 101
 *
 * '#' and ';' start comments. Every key is optional; unknown sections or
 * keys are rejected.
 */

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "omdiss/errors.hpp"
#include "omdiss/model.hpp"
#include "omdiss/sweep.hpp"
#include "omdiss/table.hpp"

namespace omdiss {

enum class TaskKind { spectrum, omit, dynamics, steady, sweep, stability_map };

[[nodiscard]] constexpr std::string_view to_string(TaskKind k) {
    switch (k) {
        case TaskKind::spectrum: return "spectrum";
        case TaskKind::omit: return "omit";
        case TaskKind::dynamics: return "dynamics";
        case TaskKind::steady: return "steady";
        case TaskKind::sweep: return "sweep";
        case TaskKind::stability_map: return "stability-map";
    }
    return "?";
}

/// PhysicalParams as written in a scenario: rates and frequencies in Hz.
struct ScenarioParams {
    double kappa_j_hz = 2e6;
    double kappa_k_hz = 2e6;
    double kappa_j_ex_hz = 1e6;
    double kappa_k_ex_hz = 1e6;
    double gamma_b_hz = 40e6;
    double gamma_m_hz = 10e3;
    double omega_b_hz = 10e9;
    double omega_m_hz = 100e6;
    double g_b_hz = 1e3;
    double g_m_j_hz = 1e3;
    double g_m_k_hz = 1e3;
    double n_m = 250.0;
    double n_b = 0.0;

    [[nodiscard]] PhysicalParams resolve() const {
        PhysicalParams p;
        p.kappa_j = angular(kappa_j_hz);
        p.kappa_k = angular(kappa_k_hz);
        p.kappa_j_ex = angular(kappa_j_ex_hz);
        p.kappa_k_ex = angular(kappa_k_ex_hz);
        p.gamma_b = angular(gamma_b_hz);
        p.gamma_m = angular(gamma_m_hz);
        p.omega_b = angular(omega_b_hz);
        p.omega_m = angular(omega_m_hz);
        p.g_b = angular(g_b_hz);
        p.g_m_j = angular(g_m_j_hz);
        p.g_m_k = angular(g_m_k_hz);
        p.n_m = n_m;
        p.n_b = n_b;
        return p;
    }

    friend bool operator==(const ScenarioParams&, const ScenarioParams&) = default;
};

/// DriveConfig as written in a scenario. Unset detunings come from the case preset.
struct ScenarioDrive {
    DetuningCase detuning_case = DetuningCase::AntiStokesBlue;
    double G_b_hz = 0.0;
    double G_m_hz = 0.0;
    std::optional<double> delta_j_hz;
    std::optional<double> delta_k_hz;
    std::optional<double> delta_b_hz;

    [[nodiscard]] DriveConfig resolve(const PhysicalParams& p) const {
        DriveConfig d = detuning_preset(detuning_case, p);
        d.G_b = angular(G_b_hz);
        d.G_m = angular(G_m_hz);
        if (delta_j_hz) d.delta_j = angular(*delta_j_hz);
        if (delta_k_hz) d.delta_k = angular(*delta_k_hz);
        if (delta_b_hz) d.delta_b = angular(*delta_b_hz);
        return d;
    }

    friend bool operator==(const ScenarioDrive&, const ScenarioDrive&) = default;
};

/// Probe detuning grid for spectrum and omit tasks.
struct ProbeGrid {
    double delta_min_hz = -4e6;
    double delta_max_hz = 4e6;
    std::size_t count = 2001;

    [[nodiscard]] std::vector<double> hz() const {
        return Axis{"delta", delta_min_hz, delta_max_hz, count, AxisScale::linear, 1.0}.grid();
    }

    friend bool operator==(const ProbeGrid&, const ProbeGrid&) = default;
};

struct DynamicsGrid {
    double t_max_us = 5.0;
    std::size_t count = 501;

    [[nodiscard]] std::vector<double> microseconds() const {
        return Axis{"t", 0.0, t_max_us, count, AxisScale::linear, 1.0}.grid();
    }

    friend bool operator==(const DynamicsGrid&, const DynamicsGrid&) = default;
};

/// One sweep axis in file units.
struct AxisSpec {
    std::string name;
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 2;
    AxisScale scale = AxisScale::linear;

    friend bool operator==(const AxisSpec&, const AxisSpec&) = default;
};

struct AxisUnit {
    std::string_view file_name;
    std::string_view internal_name;
    double unit;
};

/// Scenario axis names, the sweep axis each maps to, and the factor to internal units.
inline constexpr std::array<AxisUnit, 7> kAxisUnits = {{
    {"G_b_hz", "G_b", kTwoPi},
    {"G_m_hz", "G_m", kTwoPi},
    {"delta_b_hz", "delta_b", kTwoPi},
    {"omega_m_hz", "omega_m", kTwoPi},
    {"delta_hz", "delta", kTwoPi},
    {"n_m", "n_m", 1.0},
    {"t_us", "t", 1e-6},
}};

[[nodiscard]] inline const AxisUnit* find_axis_unit(std::string_view file_name) {
    for (const auto& a : kAxisUnits)
        if (a.file_name == file_name) return &a;
    return nullptr;
}

[[nodiscard]] inline std::optional<Observable> parse_observable(std::string_view s) {
    for (auto o : {Observable::E_N, Observable::n_f, Observable::ratio, Observable::P_a_spectrum,
                   Observable::stability}) {
        if (to_string(o) == s) return o;
    }
    return std::nullopt;
}

[[nodiscard]] inline std::optional<DetuningCase> parse_detuning_case(std::string_view s) {
    for (auto c : {DetuningCase::AntiStokesRed, DetuningCase::AntiStokesBlue, DetuningCase::StokesRed,
                   DetuningCase::StokesBlue}) {
        if (to_string(c) == s) return c;
    }
    return std::nullopt;
}

[[nodiscard]] inline std::optional<TaskKind> parse_task_kind(std::string_view s) {
    for (auto k : {TaskKind::spectrum, TaskKind::omit, TaskKind::dynamics, TaskKind::steady, TaskKind::sweep,
                   TaskKind::stability_map}) {
        if (to_string(k) == s) return k;
    }
    return std::nullopt;
}

struct SweepSection {
    /// Defaults to E_N for sweep and stability for stability-map.
    std::optional<Observable> observable;
    std::vector<AxisSpec> axes;

    friend bool operator==(const SweepSection&, const SweepSection&) = default;
};

struct Scenario {
    TaskKind task = TaskKind::spectrum;
    std::string name = "scenario";
    ScenarioParams params;
    ScenarioDrive drive;
    ProbeGrid grid;
    DynamicsGrid dynamics;
    SweepSection sweep;

    [[nodiscard]] Observable sweep_observable() const {
        if (sweep.observable) return *sweep.observable;
        return task == TaskKind::stability_map ? Observable::stability : Observable::E_N;
    }

    /// The sweep this scenario describes, in internal units.
    [[nodiscard]] SweepSpec sweep_spec() const {
        SweepSpec s;
        s.params = params.resolve();
        s.drive = drive.resolve(s.params);
        s.observable = sweep_observable();
        for (const auto& a : sweep.axes) {
            const AxisUnit* u = find_axis_unit(a.name);
            if (!u) throw InvalidSpec("unknown axis '" + a.name + "'");
            s.axes.push_back({std::string(u->internal_name), a.min, a.max, a.count, a.scale, u->unit});
        }
        return s;
    }

    /**
     * @brief Check every invariant the task depends on.
     * @return soft warnings
     * @throws ValidationError or InvalidSpec naming the violated invariant
     */
    std::vector<std::string> validate() const {
        if (name.empty() || name.find_first_not_of("ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789_.-") !=
                                std::string::npos) {
            throw ValidationError("task name must be non-empty and use only letters, digits, '_', '.', '-'");
        }
        const PhysicalParams p = params.resolve();
        auto warnings = p.validate();
        drive.resolve(p).validate();
        if (!(std::isfinite(grid.delta_min_hz) && std::isfinite(grid.delta_max_hz) &&
              grid.delta_min_hz < grid.delta_max_hz)) {
            throw ValidationError("grid: delta_min_hz must be below delta_max_hz");
        }
        if (grid.count < 2) throw ValidationError("grid: count must be >= 2");
        if (!(std::isfinite(dynamics.t_max_us) && dynamics.t_max_us > 0.0)) {
            throw ValidationError("dynamics: t_max_us must be > 0");
        }
        if (dynamics.count < 2) throw ValidationError("dynamics: count must be >= 2");

        const bool covariance_task = task == TaskKind::dynamics || task == TaskKind::steady;
        if (covariance_task && !is_anti_stokes(drive.detuning_case)) {
            throw ValidationError(std::string(to_string(task)) + " needs an anti-Stokes drive case");
        }
        if (task == TaskKind::sweep || task == TaskKind::stability_map) {
            if (sweep.axes.empty()) throw ValidationError("sweep: at least one axis is required");
            if (task == TaskKind::stability_map && sweep_observable() != Observable::stability) {
                throw ValidationError("stability-map: observable must be stability");
            }
            sweep_spec().validate();
        }
        return warnings;
    }

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_number(std::string_view text, std::size_t line, const std::string& field) {
    double v = 0.0;
    const char* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (text.empty() || res.ec != std::errc{} || res.ptr != end) {
        throw ParseError(line, field, "expected a number, got '" + std::string(text) + "'");
    }
    if (!std::isfinite(v)) throw ParseError(line, field, "value must be finite");
    return v;
}

inline std::size_t parse_count(std::string_view text, std::size_t line, const std::string& field) {
    std::size_t v = 0;
    const char* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (text.empty() || res.ec != std::errc{} || res.ptr != end) {
        throw ParseError(line, field, "expected a non-negative integer, got '" + std::string(text) + "'");
    }
    return v;
}

inline AxisSpec parse_axis(std::string_view text, std::size_t line, const std::string& field) {
    std::vector<std::string_view> tok;
    while (!text.empty()) {
        const auto b = text.find_first_not_of(" \t");
        if (b == std::string_view::npos) break;
        text.remove_prefix(b);
        const auto e = text.find_first_of(" \t");
        tok.push_back(text.substr(0, e));
        text.remove_prefix(e == std::string_view::npos ? text.size() : e);
    }
    if (tok.size() != 4 && tok.size() != 5) {
        throw ParseError(line, field, "expected 'name min max count [linear|log]'");
    }
    AxisSpec a;
    a.name = std::string(tok[0]);
    if (!find_axis_unit(a.name)) {
        std::string known;
        for (const auto& u : kAxisUnits) known += (known.empty() ? "" : ", ") + std::string(u.file_name);
        throw ParseError(line, field, "unknown axis '" + a.name + "' (known: " + known + ")");
    }
    a.min = parse_number(tok[1], line, field);
    a.max = parse_number(tok[2], line, field);
    a.count = parse_count(tok[3], line, field);
    if (tok.size() == 5) {
        if (tok[4] == "linear") {
            a.scale = AxisScale::linear;
        } else if (tok[4] == "log") {
            a.scale = AxisScale::log;
        } else {
            throw ParseError(line, field, "axis scale must be linear or log");
        }
    }
    return a;
}

}  // namespace detail

/**
 * @brief Parse and validate scenario text.
 * @throws ParseError for syntax, unknown keys or malformed values (with line and field)
 * @throws ValidationError, InvalidSpec for invariant violations
 */
[[nodiscard]] inline Scenario parse_scenario_text(std::string_view text) {
    Scenario s;
    std::string section;
    std::map<std::string, std::size_t> seen;
    std::size_t line_no = 0;
    std::optional<AxisSpec> axes[3];

    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view raw = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        ++line_no;
        const auto comment = raw.find_first_of("#;");
        const std::string_view line = detail::trim(raw.substr(0, comment));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError(line_no, std::string(line), "unterminated section header");
            section = std::string(detail::trim(line.substr(1, line.size() - 2)));
            static constexpr std::array<std::string_view, 6> sections = {"task", "params", "drive",
                                                                           "grid", "dynamics", "sweep"};
            if (std::find(sections.begin(), sections.end(), section) == sections.end()) {
                throw ParseError(line_no, section, "unknown section");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, std::string(line), "expected 'key = value'");
        const std::string key(detail::trim(line.substr(0, eq)));
        const std::string_view value = detail::trim(line.substr(eq + 1));
        if (section.empty()) throw ParseError(line_no, key, "key outside of any section");
        const std::string field = section + "." + key;
        if (auto [it, fresh] = seen.emplace(field, line_no); !fresh) {
            throw ParseError(line_no, field, "duplicate key (first set on line " + std::to_string(it->second) + ")");
        }
        auto number = [&] { return detail::parse_number(value, line_no, field); };
        auto count = [&] { return detail::parse_count(value, line_no, field); };

        if (section == "task") {
            if (key == "kind") {
                const auto k = parse_task_kind(value);
                if (!k) {
                    throw ParseError(line_no, field,
                                     "kind must be one of spectrum, omit, dynamics, steady, sweep, stability-map");
                }
                s.task = *k;
            } else if (key == "name") {
                s.name = std::string(value);
            } else {
                throw ParseError(line_no, field, "unknown key");
            }
        } else if (section == "params") {
            static const std::map<std::string, double ScenarioParams::*> keys = {
                {"kappa_j_hz", &ScenarioParams::kappa_j_hz},
                {"kappa_k_hz", &ScenarioParams::kappa_k_hz},
                {"kappa_j_ex_hz", &ScenarioParams::kappa_j_ex_hz},
                {"kappa_k_ex_hz", &ScenarioParams::kappa_k_ex_hz},
                {"gamma_b_hz", &ScenarioParams::gamma_b_hz},
                {"gamma_m_hz", &ScenarioParams::gamma_m_hz},
                {"omega_b_hz", &ScenarioParams::omega_b_hz},
                {"omega_m_hz", &ScenarioParams::omega_m_hz},
                {"g_b_hz", &ScenarioParams::g_b_hz},
                {"g_m_j_hz", &ScenarioParams::g_m_j_hz},
                {"g_m_k_hz", &ScenarioParams::g_m_k_hz},
                {"n_m", &ScenarioParams::n_m},
                {"n_b", &ScenarioParams::n_b},
            };
            const auto it = keys.find(key);
            if (it == keys.end()) throw ParseError(line_no, field, "unknown key");
            s.params.*(it->second) = number();
        } else if (section == "drive") {
            if (key == "case") {
                const auto c = parse_detuning_case(value);
                if (!c) {
                    throw ParseError(line_no, field,
                                     "case must be one of anti_stokes_red, anti_stokes_blue, stokes_red, stokes_blue");
                }
                s.drive.detuning_case = *c;
            } else if (key == "G_b_hz") {
                s.drive.G_b_hz = number();
            } else if (key == "G_m_hz") {
                s.drive.G_m_hz = number();
            } else if (key == "delta_j_hz") {
                s.drive.delta_j_hz = number();
            } else if (key == "delta_k_hz") {
                s.drive.delta_k_hz = number();
            } else if (key == "delta_b_hz") {
                s.drive.delta_b_hz = number();
            } else {
                throw ParseError(line_no, field, "unknown key");
            }
        } else if (section == "grid") {
            if (key == "delta_min_hz") {
                s.grid.delta_min_hz = number();
            } else if (key == "delta_max_hz") {
                s.grid.delta_max_hz = number();
            } else if (key == "count") {
                s.grid.count = count();
            } else {
                throw ParseError(line_no, field, "unknown key");
            }
        } else if (section == "dynamics") {
            if (key == "t_max_us") {
                s.dynamics.t_max_us = number();
            } else if (key == "count") {
                s.dynamics.count = count();
            } else {
                throw ParseError(line_no, field, "unknown key");
            }
        } else if (section == "sweep") {
            if (key == "observable") {
                const auto o = parse_observable(value);
                if (!o) throw ParseError(line_no, field, "observable must be one of E_N, n_f, ratio, P_a_spectrum, stability");
                s.sweep.observable = *o;
            } else if (key == "axis1" || key == "axis2" || key == "axis3") {
                axes[key[4] - '1'] = detail::parse_axis(value, line_no, field);
            } else {
                throw ParseError(line_no, field, "unknown key");
            }
        }
    }
    for (std::size_t i = 0; i < 3; ++i) {
        if (!axes[i]) continue;
        if (i > 0 && !axes[i - 1]) {
            throw ParseError(seen.at("sweep.axis" + std::to_string(i + 1)), "sweep.axis" + std::to_string(i + 1),
                             "axis" + std::to_string(i + 1) + " given without axis" + std::to_string(i));
        }
        s.sweep.axes.push_back(*axes[i]);
    }
    s.validate();
    return s;
}

/// Read and parse a scenario file.
[[nodiscard]] inline Scenario parse_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str());
}

/// Scenario text that parses back to an equal Scenario.
[[nodiscard]] inline std::string to_ini(const Scenario& s) {
    std::ostringstream os;
    auto kv = [&](std::string_view k, double v) { os << k << " = " << format_double(v) << '\n'; };
    os << "[task]\nkind = " << to_string(s.task) << "\nname = " << s.name << "\n\n";
    os << "[params]\n";
    kv("kappa_j_hz", s.params.kappa_j_hz);
    kv("kappa_k_hz", s.params.kappa_k_hz);
    kv("kappa_j_ex_hz", s.params.kappa_j_ex_hz);
    kv("kappa_k_ex_hz", s.params.kappa_k_ex_hz);
    kv("gamma_b_hz", s.params.gamma_b_hz);
    kv("gamma_m_hz", s.params.gamma_m_hz);
    kv("omega_b_hz", s.params.omega_b_hz);
    kv("omega_m_hz", s.params.omega_m_hz);
    kv("g_b_hz", s.params.g_b_hz);
    kv("g_m_j_hz", s.params.g_m_j_hz);
    kv("g_m_k_hz", s.params.g_m_k_hz);
    kv("n_m", s.params.n_m);
    kv("n_b", s.params.n_b);
    os << "\n[drive]\ncase = " << to_string(s.drive.detuning_case) << '\n';
    kv("G_b_hz", s.drive.G_b_hz);
    kv("G_m_hz", s.drive.G_m_hz);
    if (s.drive.delta_j_hz) kv("delta_j_hz", *s.drive.delta_j_hz);
    if (s.drive.delta_k_hz) kv("delta_k_hz", *s.drive.delta_k_hz);
    if (s.drive.delta_b_hz) kv("delta_b_hz", *s.drive.delta_b_hz);
    os << "\n[grid]\n";
    kv("delta_min_hz", s.grid.delta_min_hz);
    kv("delta_max_hz", s.grid.delta_max_hz);
    os << "count = " << s.grid.count << '\n';
    os << "\n[dynamics]\n";
    kv("t_max_us", s.dynamics.t_max_us);
    os << "count = " << s.dynamics.count << '\n';
    if (s.sweep.observable || !s.sweep.axes.empty()) {
        os << "\n[sweep]\n";
        if (s.sweep.observable) os << "observable = " << to_string(*s.sweep.observable) << '\n';
        for (std::size_t i = 0; i < s.sweep.axes.size(); ++i) {
            const auto& a = s.sweep.axes[i];
            os << "axis" << (i + 1) << " = " << a.name << ' ' << format_double(a.min) << ' ' << format_double(a.max)
               << ' ' << a.count << ' ' << (a.scale == AxisScale::log ? "log" : "linear") << '\n';
        }
    }
    return os.str();
}

}  // namespace omdiss
