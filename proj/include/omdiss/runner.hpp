#pragma once

/**
 * @file runner.hpp
 * @brief Turns a Scenario into output tables.
 */

#include <string>
#include <vector>

#include "omdiss/gaussian.hpp"
#include "omdiss/observables.hpp"
#include "omdiss/response.hpp"
#include "omdiss/scenario.hpp"
#include "omdiss/sweep.hpp"
#include "omdiss/table.hpp"

namespace omdiss {

/// One output file; an empty suffix is `<name>.csv`, otherwise `<name>_<suffix>.csv`.
struct NamedTable {
    std::string suffix;
    Table table;
};

struct RunResult {
    std::vector<NamedTable> tables;
    /// Every evaluated cell was unstable or past threshold.
    bool all_unstable = false;
    std::vector<std::string> warnings;
};

/// Column name a sweep observable is written under.
[[nodiscard]] constexpr std::string_view column_name(Observable o) {
    switch (o) {
        case Observable::E_N: return "E_am";
        case Observable::n_f: return "n_f";
        case Observable::ratio: return "ratio";
        case Observable::P_a_spectrum: return "p_a";
        case Observable::stability: return "stable";
    }
    return "?";
}

/// Scenario-file name of an internal axis ("G_b" -> "G_b_hz").
[[nodiscard]] inline std::string axis_file_name(std::string_view internal) {
    for (const auto& u : kAxisUnits)
        if (u.internal_name == internal) return std::string(u.file_name);
    return std::string(internal);
}

[[nodiscard]] inline bool all_cells_failed(const SweepResult& r) {
    return std::none_of(r.flags.begin(), r.flags.end(), [](CellStatus s) { return s == CellStatus::ok; });
}

/**
 * @brief Long-format table: one column per axis (file units), the value, then the flag.
 * @param leading extra constant columns placed first, e.g. a curve parameter
 */
inline void append_sweep_rows(Table& t, const SweepResult& r, Observable o,
                              const std::vector<double>& leading = {}) {
    std::vector<std::vector<double>> grids;
    for (const auto& a : r.axes) grids.push_back(a.grid());
    for (std::size_t f = 0; f < r.size(); ++f) {
        const auto idx = r.unflatten(f);
        std::vector<Table::Cell> row;
        for (double v : leading) row.emplace_back(v);
        for (std::size_t a = 0; a < r.axes.size(); ++a) row.emplace_back(grids[a][idx[a]]);
        if (o == Observable::stability) {
            row.emplace_back(r.flags[f] == CellStatus::ok ? 1.0 : 0.0);
        } else {
            row.push_back(Table::cell(r.values[f]));
        }
        row.emplace_back(std::string(to_string(r.flags[f])));
        t.add_row(std::move(row));
    }
}

[[nodiscard]] inline Table sweep_table(const SweepResult& r, Observable o) {
    std::vector<std::string> header;
    for (const auto& a : r.axes) header.push_back(axis_file_name(a.name));
    header.emplace_back(column_name(o));
    header.emplace_back("flag");
    Table t(std::move(header));
    append_sweep_rows(t, r, o);
    return t;
}

namespace detail {

inline std::vector<double> to_angular(const std::vector<double>& hz) {
    std::vector<double> out(hz.size());
    for (std::size_t i = 0; i < hz.size(); ++i) out[i] = angular(hz[i]);
    return out;
}

inline RunResult run_spectrum(const Scenario& s, const PhysicalParams& p, const DriveConfig& d) {
    const auto hz = s.grid.hz();
    const auto grid = to_angular(hz);
    const bool full = s.task == TaskKind::omit;
    const Process proc = process_of(d.detuning_case);
    const Spectrum spec = full ? omit_spectrum(p, d.G_b, d.G_m, d.detuning_case, grid)
                               : linewidth_spectrum(p, d.G_b, proc, grid);
    const bool past = spec.gain_exceeds_loss || spec.unstable_response;
    RunResult out;
    if (full) {
        const double kappa_eff = effective_linewidth(p, d.G_b, 0.0, proc).kappa_eff;
        const Spectrum approx = omit_approx(p, kappa_eff, d.G_m, is_blue(d.detuning_case), grid);
        Table t({"delta_hz", "p_a", "p_a_approx", "flag"});
        for (std::size_t i = 0; i < hz.size(); ++i) {
            t.add_row({hz[i], spec.points[i].p_a, approx.points[i].p_a, std::string(past ? "threshold" : "ok")});
        }
        out.tables.push_back({"", std::move(t)});
    } else {
        Table t({"delta_hz", "p_a", "flag"});
        for (std::size_t i = 0; i < hz.size(); ++i) {
            t.add_row({hz[i], spec.points[i].p_a, std::string(past ? "threshold" : "ok")});
        }
        out.tables.push_back({"", std::move(t)});
    }
    out.all_unstable = past;
    if (past) out.warnings.emplace_back("response is past the gain threshold");
    return out;
}

inline RunResult run_dynamics(const Scenario& s, const PhysicalParams& p, const DriveConfig& d) {
    const auto us = s.dynamics.microseconds();
    std::vector<double> t(us.size());
    for (std::size_t i = 0; i < us.size(); ++i) t[i] = us[i] * 1e-6;
    const DriftModel drift = build_drift(p, d);
    RunResult out;
    Table tab({"t_us", "E_am", "n_f", "flag"});
    if (!stability(drift).stable) {
        for (double u : us) tab.add_row({u, {}, {}, std::string("unstable")});
        out.all_unstable = true;
    } else {
        const auto traj = evolve_covariance(drift, equilibrium_initial_state(p), t);
        for (std::size_t i = 0; i < us.size(); ++i) {
            tab.add_row({us[i], log_negativity(traj[i]), thermal_occupation(traj[i]), std::string("ok")});
        }
    }
    out.tables.push_back({"", std::move(tab)});
    return out;
}

inline RunResult run_steady(const PhysicalParams& p, const DriveConfig& d) {
    RunResult out;
    Table t({"E_am", "n_f", "n_f_rate_equation", "n_f_no_engineering", "ratio", "flag"});
    DriveConfig bare = d;
    bare.G_b = 0.0;
    const DriftModel drift = build_drift(p, d);
    const DriftModel ref = build_drift(p, bare);
    const double rate = rate_equation_nf(p, d.G_m, d.G_b);
    if (!stability(drift).stable) {
        t.add_row({{}, {}, rate, {}, {}, std::string("unstable")});
        out.all_unstable = true;
    } else {
        const auto v = steady_covariance(drift);
        const double n_f = thermal_occupation(v);
        Table::Cell n_ref, ratio;
        if (stability(ref).stable) {
            const double r = thermal_occupation(steady_covariance(ref));
            n_ref = r;
            ratio = r / n_f;
        }
        t.add_row({log_negativity(v), n_f, rate, n_ref, ratio, std::string("ok")});
    }
    out.tables.push_back({"", std::move(t)});
    return out;
}

}  // namespace detail

/**
 * @brief Run a validated scenario.
 * @throws ValidationError, InvalidSpec if the scenario does not validate
 */
[[nodiscard]] inline RunResult execute(const Scenario& s, SweepOptions opts = {}) {
    auto warnings = s.validate();
    const PhysicalParams p = s.params.resolve();
    const DriveConfig d = s.drive.resolve(p);
    RunResult out;
    switch (s.task) {
        case TaskKind::spectrum:
        case TaskKind::omit: out = detail::run_spectrum(s, p, d); break;
        case TaskKind::dynamics: out = detail::run_dynamics(s, p, d); break;
        case TaskKind::steady: out = detail::run_steady(p, d); break;
        case TaskKind::sweep:
        case TaskKind::stability_map: {
            const SweepSpec spec = s.sweep_spec();
            const SweepResult r = run_sweep(spec, opts);
            out.tables.push_back({"", sweep_table(r, spec.observable)});
            out.all_unstable = all_cells_failed(r);
            break;
        }
    }
    warnings.insert(warnings.end(), out.warnings.begin(), out.warnings.end());
    out.warnings = std::move(warnings);
    return out;
}

}  // namespace omdiss
