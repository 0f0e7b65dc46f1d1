#pragma once

/**
 * @file presets.hpp
 * @brief Figure presets: fixed scans that regenerate each panel group's data.
 */

#include <algorithm>
#include <functional>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "omdiss/runner.hpp"

namespace omdiss {

/// A parameter point a preset evaluates; used for steady-state/dynamics cross-checks.
struct OperatingPoint {
    std::string label;
    PhysicalParams params;
    DriveConfig drive;
};

struct Preset {
    std::string_view name;
    std::string_view description;
    std::function<RunResult(const SweepOptions&)> run;
    /// Covariance operating points; empty for frequency-domain presets.
    std::function<std::vector<OperatingPoint>()> operating_points;
    /// Parameters shared by every curve (axes and curve lists override some).
    PhysicalParams params;
};

namespace presets {

inline constexpr double MHz = 1e6;

inline PhysicalParams base(double n_m) {
    PhysicalParams p;
    p.n_m = n_m;
    return p;
}

/// The label suffix for a coupling in MHz, e.g. 2 -> "2MHz", 0.03 -> "0.03MHz".
inline std::string mhz_label(double mhz) { return format_double(mhz) + "MHz"; }

inline Axis hz_axis(std::string_view name, double lo_hz, double hi_hz, std::size_t n) {
    return Axis{std::string(name), lo_hz, hi_hz, n, AxisScale::linear, kTwoPi};
}

inline std::vector<double> probe_grid_hz(double lo_hz, double hi_hz, std::size_t n) {
    return Axis{"delta", lo_hz, hi_hz, n, AxisScale::linear, 1.0}.grid();
}

inline RunResult fig2a(const SweepOptions&) {
    const PhysicalParams p = base(250);
    const auto hz = probe_grid_hz(-4 * MHz, 4 * MHz, 2001);
    const auto grid = detail::to_angular(hz);
    struct Curve {
        double gb_mhz;
        Process proc;
    };
    const Curve curves[] = {{0, Process::Stokes}, {2, Process::Stokes}, {3, Process::Stokes},
                            {2, Process::AntiStokes}, {3, Process::AntiStokes}};
    std::vector<Spectrum> spectra;
    for (const auto& c : curves) spectra.push_back(linewidth_spectrum(p, angular(c.gb_mhz * MHz), c.proc, grid));
    Table t({"delta_hz", "p_a_g0", "p_a_stokes_2MHz", "p_a_stokes_3MHz", "p_a_antistokes_2MHz",
             "p_a_antistokes_3MHz"});
    for (std::size_t i = 0; i < hz.size(); ++i) {
        std::vector<Table::Cell> row{hz[i]};
        for (const auto& s : spectra) row.emplace_back(s.points[i].p_a);
        t.add_row(std::move(row));
    }
    RunResult out;
    out.tables.push_back({"", std::move(t)});
    return out;
}

inline Table omit_table(const PhysicalParams& p, const std::vector<double>& hz, double gm) {
    const auto grid = detail::to_angular(hz);
    const DetuningCase cases[] = {DetuningCase::AntiStokesRed, DetuningCase::AntiStokesBlue, DetuningCase::StokesRed,
                                  DetuningCase::StokesBlue};
    const double gbs[] = {0.0, 2.0, 3.0};
    std::vector<std::string> header{"delta_hz"};
    std::vector<Spectrum> spectra;
    for (auto c : cases) {
        for (double gb : gbs) {
            header.push_back("p_a_" + std::string(to_string(c)) + "_" + mhz_label(gb));
            spectra.push_back(omit_spectrum(p, angular(gb * MHz), gm, c, grid));
        }
    }
    Table t(std::move(header));
    for (std::size_t i = 0; i < hz.size(); ++i) {
        std::vector<Table::Cell> row{hz[i]};
        for (const auto& s : spectra) row.emplace_back(s.points[i].p_a);
        t.add_row(std::move(row));
    }
    return t;
}

/// Wide OMIT/OMIA spectra (panel b) and the two-photon-resonance zoom (panel c, suffix "zoom").
inline RunResult fig2bc(const SweepOptions&) {
    const PhysicalParams p = base(250);
    const double gm = angular(0.03 * MHz);
    RunResult out;
    out.tables.push_back({"", omit_table(p, probe_grid_hz(-4 * MHz, 4 * MHz, 2001), gm)});
    out.tables.push_back({"zoom", omit_table(p, probe_grid_hz(-0.01 * MHz, 0.01 * MHz, 2001), gm)});
    return out;
}

inline constexpr double kFig3Gb[] = {0.0, 2.0, 4.0, 8.0};
inline constexpr double kFig3Gm[] = {0.03, 0.04, 0.05};

/// E_am(t) for each G_b in kFig3Gb, from the equilibrium initial state.
inline Table entanglement_dynamics(double n_m, const SweepOptions& opts) {
    const PhysicalParams p = base(n_m);
    const auto us = probe_grid_hz(0.0, 5.0, 501);
    SweepSpec spec;
    spec.params = p;
    spec.drive = entanglement_preset(p, 0.0, angular(0.03 * MHz));
    spec.axes = {hz_axis("G_b", 0.0, 8 * MHz, 5), Axis{"t", 0.0, 5.0, 501, AxisScale::linear, 1e-6}};
    spec.observable = Observable::E_N;
    // G_b grid {0, 2, 4, 6, 8} MHz contains every kFig3Gb value
    const SweepResult r = run_sweep(spec, opts);
    std::vector<std::string> header{"t_us"};
    std::vector<std::size_t> rows;
    for (double gb : kFig3Gb) {
        header.push_back("E_am_" + mhz_label(gb));
        rows.push_back(static_cast<std::size_t>(gb / 2.0));
    }
    Table t(std::move(header));
    for (std::size_t k = 0; k < us.size(); ++k) {
        std::vector<Table::Cell> row{us[k]};
        for (std::size_t g : rows) row.push_back(Table::cell(r.at({g, k})));
        t.add_row(std::move(row));
    }
    return t;
}

/// Steady E_am over G_b ∈ [0, 10] MHz (101 points) for each G_m in kFig3Gm.
inline Table entanglement_vs_gb(double n_m, const SweepOptions& opts) {
    const PhysicalParams p = base(n_m);
    Table t({"G_m_hz", "G_b_hz", "E_am", "flag"});
    for (double gm : kFig3Gm) {
        SweepSpec spec;
        spec.params = p;
        spec.drive = entanglement_preset(p, 0.0, angular(gm * MHz));
        spec.axes = {hz_axis("G_b", 0.0, 10 * MHz, 101)};
        spec.observable = Observable::E_N;
        append_sweep_rows(t, run_sweep(spec, opts), spec.observable, {gm * MHz});
    }
    return t;
}

inline RunResult fig3a(const SweepOptions& opts) {
    RunResult out;
    out.tables.push_back({"", entanglement_dynamics(250, opts)});
    return out;
}

inline RunResult fig3b(const SweepOptions& opts) {
    RunResult out;
    out.tables.push_back({"", entanglement_vs_gb(250, opts)});
    return out;
}

/// n_m = 300 repeats: dynamics (panel c) and steady scan (panel d, suffix "steady").
inline RunResult fig3cd(const SweepOptions& opts) {
    RunResult out;
    out.tables.push_back({"", entanglement_dynamics(300, opts)});
    out.tables.push_back({"steady", entanglement_vs_gb(300, opts)});
    return out;
}

inline SweepSpec fig4a_spec() {
    SweepSpec s;
    s.params = base(250);
    s.drive = entanglement_preset(s.params, 0.0, angular(0.05 * MHz));
    s.axes = {hz_axis("delta_b", -150 * MHz, -50 * MHz, 61), hz_axis("G_b", 0.0, 10 * MHz, 61)};
    s.observable = Observable::E_N;
    return s;
}

inline SweepSpec fig4b_spec() {
    SweepSpec s;
    s.params = base(250);
    s.drive = entanglement_preset(s.params, 0.0, 0.0);
    s.axes = {hz_axis("G_m", 0.0, 0.2 * MHz, 61), hz_axis("G_b", 0.0, 10 * MHz, 61)};
    s.observable = Observable::E_N;
    return s;
}

inline RunResult single_sweep(const SweepSpec& spec, const SweepOptions& opts) {
    const SweepResult r = run_sweep(spec, opts);
    RunResult out;
    out.tables.push_back({"", sweep_table(r, spec.observable)});
    out.all_unstable = all_cells_failed(r);
    return out;
}

inline constexpr double kFig5Gb[] = {0.0, 20.0, 40.0};
inline constexpr double kFig5Gm[] = {1.0, 10.0, 20.0};

/// n_f over G_m ∈ [0, 20] MHz (101 points) for each G_b in kFig5Gb.
inline RunResult fig5a(const SweepOptions& opts) {
    const PhysicalParams p = base(100);
    Table t({"G_b_hz", "G_m_hz", "n_f", "flag"});
    for (double gb : kFig5Gb) {
        SweepSpec spec;
        spec.params = p;
        spec.drive = cooling_preset(p, angular(gb * MHz), 0.0);
        spec.axes = {hz_axis("G_m", 0.0, 20 * MHz, 101)};
        spec.observable = Observable::n_f;
        append_sweep_rows(t, run_sweep(spec, opts), spec.observable, {gb * MHz});
    }
    RunResult out;
    out.tables.push_back({"", std::move(t)});
    return out;
}

/// n_f over G_b ∈ [0, 40] MHz (101 points) for each G_m in kFig5Gm.
inline RunResult fig5b(const SweepOptions& opts) {
    const PhysicalParams p = base(100);
    Table t({"G_m_hz", "G_b_hz", "n_f", "flag"});
    for (double gm : kFig5Gm) {
        SweepSpec spec;
        spec.params = p;
        spec.drive = cooling_preset(p, 0.0, angular(gm * MHz));
        spec.axes = {hz_axis("G_b", 0.0, 40 * MHz, 101)};
        spec.observable = Observable::n_f;
        append_sweep_rows(t, run_sweep(spec, opts), spec.observable, {gm * MHz});
    }
    RunResult out;
    out.tables.push_back({"", std::move(t)});
    return out;
}

/// Cooling map over G_m ∈ [0, 20] MHz × G_b ∈ [0, 40] MHz, 61×61.
inline SweepSpec cooling_map_spec(double n_m, double omega_m_hz = 100 * MHz) {
    SweepSpec s;
    s.params = base(n_m);
    s.params.omega_m = angular(omega_m_hz);
    s.drive = cooling_preset(s.params, 0.0, 0.0);
    s.axes = {hz_axis("G_m", 0.0, 20 * MHz, 61), hz_axis("G_b", 0.0, 40 * MHz, 61)};
    s.observable = Observable::n_f;
    return s;
}

struct CoolingOptimum {
    double n_f = 0.0;
    double G_m_hz = 0.0;
    double G_b_hz = 0.0;
    /// Best n_f with G_b = 0.
    double n_f_ref = 0.0;
};

/// Grid optimum of a cooling map and the best G_b = 0 cell.
inline CoolingOptimum cooling_optimum(const SweepSpec& spec, const SweepResult& r) {
    const auto opt = find_optimum(r, Sense::min);
    const std::size_t gm_axis = r.axis_position("G_m");
    const std::size_t gb_axis = r.axis_position("G_b");
    CoolingOptimum c;
    c.n_f = opt.value;
    c.G_m_hz = spec.axes[gm_axis].grid()[opt.indices[gm_axis]];
    c.G_b_hz = spec.axes[gb_axis].grid()[opt.indices[gb_axis]];
    c.n_f_ref = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> idx(2, 0);
    for (std::size_t i = 0; i < spec.axes[gm_axis].count; ++i) {
        idx[gm_axis] = i;
        idx[gb_axis] = 0;
        if (const auto v = r.at(idx)) c.n_f_ref = std::min(c.n_f_ref, *v);
    }
    return c;
}

inline constexpr double kFig6OmegaM[] = {50.0, 100.0, 200.0};

inline RunResult fig6(const SweepOptions& opts) {
    Table t({"omega_m_hz", "n_m", "n_f_opt", "G_m_opt_hz", "G_b_opt_hz", "n_f_ref", "ratio"});
    for (double wm : kFig6OmegaM) {
        for (int k = 1; k <= 10; ++k) {
            const double n_m = 50.0 * k;
            const SweepSpec spec = cooling_map_spec(n_m, wm * MHz);
            const auto c = cooling_optimum(spec, run_sweep(spec, opts));
            t.add_row({wm * MHz, n_m, c.n_f, c.G_m_hz, c.G_b_hz, c.n_f_ref, c.n_f_ref / c.n_f});
        }
    }
    RunResult out;
    out.tables.push_back({"", std::move(t)});
    return out;
}

inline std::vector<OperatingPoint> entanglement_points(double n_m) {
    std::vector<OperatingPoint> pts;
    const PhysicalParams p = base(n_m);
    for (double gm : kFig3Gm) {
        for (double gb : kFig3Gb) {
            pts.push_back({"n_m=" + format_double(n_m) + " G_m=" + mhz_label(gm) + " G_b=" + mhz_label(gb), p,
                           entanglement_preset(p, angular(gb * MHz), angular(gm * MHz))});
        }
    }
    return pts;
}

inline std::vector<OperatingPoint> fig4a_points() {
    std::vector<OperatingPoint> pts;
    const PhysicalParams p = base(250);
    for (double db : {-150.0, -100.0, -50.0}) {
        for (double gb : {2.0, 5.0, 10.0}) {
            auto d = entanglement_preset(p, angular(gb * MHz), angular(0.05 * MHz));
            d.delta_b = angular(db * MHz);
            pts.push_back({"delta_b=" + mhz_label(db) + " G_b=" + mhz_label(gb), p, d});
        }
    }
    return pts;
}

inline std::vector<OperatingPoint> fig4b_points() {
    std::vector<OperatingPoint> pts;
    const PhysicalParams p = base(250);
    for (double gm : {0.02, 0.06, 0.1, 0.15}) {
        for (double gb : {1.0, 5.0, 10.0}) {
            pts.push_back({"G_m=" + mhz_label(gm) + " G_b=" + mhz_label(gb), p,
                           entanglement_preset(p, angular(gb * MHz), angular(gm * MHz))});
        }
    }
    return pts;
}

inline std::vector<OperatingPoint> cooling_points(const std::vector<double>& omega_m_mhz,
                                                  const std::vector<double>& n_ms) {
    std::vector<OperatingPoint> pts;
    for (double wm : omega_m_mhz) {
        for (double n_m : n_ms) {
            PhysicalParams p = base(n_m);
            p.omega_m = angular(wm * MHz);
            for (double gm : kFig5Gm) {
                for (double gb : kFig5Gb) {
                    pts.push_back({"omega_m=" + mhz_label(wm) + " n_m=" + format_double(n_m) + " G_m=" +
                                       mhz_label(gm) + " G_b=" + mhz_label(gb),
                                   p, cooling_preset(p, angular(gb * MHz), angular(gm * MHz))});
                }
            }
        }
    }
    return pts;
}

}  // namespace presets

/// All figure presets, in figure order.
[[nodiscard]] inline const std::vector<Preset>& all_presets() {
    using namespace presets;
    static const std::vector<Preset> list = {
        {"fig2a", "linewidth engineering: P_a for Stokes/anti-Stokes G_b = 0, 2, 3 MHz", fig2a, [] {
             return std::vector<OperatingPoint>{};
         }, base(250)},
        {"fig2bc", "OMIT/OMIA spectra for the four detuning cases, G_b = 0, 2, 3 MHz", fig2bc, [] {
             return std::vector<OperatingPoint>{};
         }, base(250)},
        {"fig3a", "E_am(t) for G_b = 0, 2, 4, 8 MHz, n_m = 250", fig3a, [] { return entanglement_points(250); },
         base(250)},
        {"fig3b", "steady E_am over G_b for G_m = 0.03, 0.04, 0.05 MHz, n_m = 250", fig3b,
         [] { return entanglement_points(250); }, base(250)},
        {"fig3cd", "fig3a and fig3b repeated at n_m = 300", fig3cd, [] { return entanglement_points(300); },
         base(300)},
        {"fig4a", "steady E_am over delta_b x G_b, G_m = 0.05 MHz", [](const SweepOptions& o) {
             return single_sweep(fig4a_spec(), o);
         }, fig4a_points, base(250)},
        {"fig4b", "steady E_am over G_m x G_b with the unstable region flagged", [](const SweepOptions& o) {
             return single_sweep(fig4b_spec(), o);
         }, fig4b_points, base(250)},
        {"fig5a", "n_f over G_m for G_b = 0, 20, 40 MHz, n_m = 100", fig5a,
         [] { return cooling_points({100.0}, {100.0}); }, base(100)},
        {"fig5b", "n_f over G_b for G_m = 1, 10, 20 MHz, n_m = 100", fig5b,
         [] { return cooling_points({100.0}, {100.0}); }, base(100)},
        {"fig5c", "n_f over G_m x G_b, n_m = 100", [](const SweepOptions& o) {
             return single_sweep(cooling_map_spec(100), o);
         }, [] { return cooling_points({100.0}, {100.0}); }, base(100)},
        {"fig6", "optimal n_f and cooling ratio over n_m for omega_m = 50, 100, 200 MHz", fig6,
         [] { return cooling_points({50.0, 100.0, 200.0}, {50.0, 500.0}); }, base(100)},
    };
    return list;
}

[[nodiscard]] inline const Preset* find_preset(std::string_view name) {
    const auto& list = all_presets();
    const auto it = std::find_if(list.begin(), list.end(), [&](const Preset& p) { return p.name == name; });
    return it == list.end() ? nullptr : &*it;
}

}  // namespace omdiss
