#pragma once

/**
 * @file sweep.hpp
 * @brief Grid sweeps over drive and system parameters, and grid-search optima.
 *
 * Axis values are in internal units (rad/s, seconds, dimensionless n_m).
 * Cells are independent; evaluation may be spread across threads, but the
 * output table is always ordered by grid index.
 */

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "omdiss/errors.hpp"
#include "omdiss/gaussian.hpp"
#include "omdiss/model.hpp"
#include "omdiss/observables.hpp"
#include "omdiss/response.hpp"

namespace omdiss {

enum class AxisScale { linear, log };

/// Parameter paths an axis may name.
inline constexpr std::array<std::string_view, 7> kAxisNames = {"G_b", "G_m", "delta_b", "n_m", "omega_m", "delta", "t"};

struct Axis {
    std::string name;
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 2;
    AxisScale scale = AxisScale::linear;
    /// Factor from the units of min/max to internal units (e.g. 2π for Hz).
    double unit = 1.0;

    /// Grid points in the units of min/max.
    [[nodiscard]] std::vector<double> grid() const {
        std::vector<double> v(count);
        for (std::size_t i = 0; i < count; ++i) {
            const double f = static_cast<double>(i) / static_cast<double>(count - 1);
            v[i] = scale == AxisScale::linear ? min + (max - min) * f
                                              : std::exp(std::log(min) + (std::log(max) - std::log(min)) * f);
        }
        v.front() = min;
        v.back() = max;
        return v;
    }

    /// Grid points in internal units.
    [[nodiscard]] std::vector<double> values() const {
        auto v = grid();
        if (unit != 1.0)
            for (double& x : v) x *= unit;
        return v;
    }

    friend bool operator==(const Axis&, const Axis&) = default;
};

enum class Observable { E_N, n_f, ratio, P_a_spectrum, stability };

[[nodiscard]] constexpr std::string_view to_string(Observable o) {
    switch (o) {
        case Observable::E_N: return "E_N";
        case Observable::n_f: return "n_f";
        case Observable::ratio: return "ratio";
        case Observable::P_a_spectrum: return "P_a_spectrum";
        case Observable::stability: return "stability";
    }
    return "?";
}

enum class CellStatus { ok, unstable, threshold };

[[nodiscard]] constexpr std::string_view to_string(CellStatus s) {
    switch (s) {
        case CellStatus::ok: return "ok";
        case CellStatus::unstable: return "unstable";
        case CellStatus::threshold: return "threshold";
    }
    return "?";
}

struct SweepSpec {
    PhysicalParams params;
    DriveConfig drive;
    /// One or two axes; "t" (dynamic E_N) may be added as a further axis.
    std::vector<Axis> axes;
    Observable observable = Observable::E_N;

    void validate() const {
        params.validate();
        drive.validate();
        std::size_t static_axes = 0;
        std::set<std::string> seen;
        for (const auto& a : axes) {
            if (std::find(kAxisNames.begin(), kAxisNames.end(), a.name) == kAxisNames.end()) {
                throw InvalidSpec("unknown axis '" + a.name + "'");
            }
            if (!seen.insert(a.name).second) throw InvalidSpec("duplicate axis '" + a.name + "'");
            if (a.count < 2) throw InvalidSpec("axis '" + a.name + "' needs count >= 2");
            if (!std::isfinite(a.min) || !std::isfinite(a.max) || a.max < a.min) {
                throw InvalidSpec("axis '" + a.name + "' has an invalid range");
            }
            if (!(std::isfinite(a.unit) && a.unit > 0.0)) throw InvalidSpec("axis '" + a.name + "' has an invalid unit");
            if (a.scale == AxisScale::log && !(a.min > 0.0)) {
                throw InvalidSpec("log axis '" + a.name + "' needs min > 0");
            }
            if (a.name != "t") ++static_axes;
        }
        if (static_axes < 1 && !seen.contains("t")) throw InvalidSpec("sweep needs at least one axis");
        if (static_axes > 2) throw InvalidSpec("sweep supports at most two parameter axes");
        if (seen.contains("t")) {
            if (observable != Observable::E_N) throw InvalidSpec("axis 't' requires observable E_N");
            const auto& t = *std::find_if(axes.begin(), axes.end(), [](const Axis& a) { return a.name == "t"; });
            if (t.min < 0.0) throw InvalidSpec("axis 't' must start at or after 0");
        }
        const bool probe = seen.contains("delta");
        if (observable == Observable::P_a_spectrum && !probe) {
            throw InvalidSpec("observable P_a_spectrum requires a 'delta' axis");
        }
        if (observable != Observable::P_a_spectrum && probe) {
            throw InvalidSpec("axis 'delta' is only meaningful for P_a_spectrum");
        }
        if (observable != Observable::P_a_spectrum && !is_anti_stokes(drive.detuning_case)) {
            throw InvalidSpec("covariance observables need an anti-Stokes drive case");
        }
    }
};

struct SweepResult {
    std::vector<Axis> axes;
    std::vector<std::vector<double>> axis_values;
    /// Row-major over axes; empty for non-ok cells.
    std::vector<std::optional<double>> values;
    std::vector<CellStatus> flags;

    [[nodiscard]] std::size_t size() const { return values.size(); }

    [[nodiscard]] std::size_t flat_index(const std::vector<std::size_t>& idx) const {
        std::size_t f = 0;
        for (std::size_t a = 0; a < axes.size(); ++a) f = f * axes[a].count + idx.at(a);
        return f;
    }

    [[nodiscard]] std::vector<std::size_t> unflatten(std::size_t flat) const {
        std::vector<std::size_t> idx(axes.size());
        for (std::size_t a = axes.size(); a-- > 0;) {
            idx[a] = flat % axes[a].count;
            flat /= axes[a].count;
        }
        return idx;
    }

    [[nodiscard]] std::optional<double> at(const std::vector<std::size_t>& idx) const {
        return values[flat_index(idx)];
    }
    [[nodiscard]] CellStatus flag_at(const std::vector<std::size_t>& idx) const { return flags[flat_index(idx)]; }

    [[nodiscard]] std::size_t axis_position(std::string_view name) const {
        for (std::size_t a = 0; a < axes.size(); ++a)
            if (axes[a].name == name) return a;
        throw InvalidSpec("sweep result has no axis '" + std::string(name) + "'");
    }

    friend bool operator==(const SweepResult&, const SweepResult&) = default;
};

struct SweepOptions {
    unsigned threads = 1;
};

/// Parameter point for one grid cell (ignores the evaluation axes "delta" and "t").
struct CellPoint {
    PhysicalParams params;
    DriveConfig drive;
    double delta = 0.0;
};

namespace detail {

inline CellPoint apply_axes(const SweepSpec& spec, const std::vector<std::vector<double>>& axis_values,
                            const std::vector<std::size_t>& idx) {
    CellPoint pt{spec.params, spec.drive, 0.0};
    auto value_of = [&](std::string_view name) -> std::optional<double> {
        for (std::size_t a = 0; a < spec.axes.size(); ++a)
            if (spec.axes[a].name == name) return axis_values[a][idx[a]];
        return std::nullopt;
    };
    // ω_m moves the preset detunings with it; explicit detuning axes apply afterwards.
    if (auto w = value_of("omega_m")) {
        pt.params.omega_m = *w;
        const DriveConfig moved = detuning_preset(pt.drive.detuning_case, pt.params);
        pt.drive.delta_j = moved.delta_j;
        pt.drive.delta_k = moved.delta_k;
        pt.drive.delta_b = moved.delta_b;
    }
    if (auto n = value_of("n_m")) pt.params.n_m = *n;
    if (auto g = value_of("G_b")) pt.drive.G_b = *g;
    if (auto g = value_of("G_m")) pt.drive.G_m = *g;
    if (auto d = value_of("delta_b")) pt.drive.delta_b = *d;
    if (auto d = value_of("delta")) pt.delta = *d;
    return pt;
}

struct CellValue {
    std::optional<double> value;
    CellStatus status = CellStatus::ok;
};

inline CellValue evaluate_static(const SweepSpec& spec, const CellPoint& pt) {
    if (spec.observable == Observable::P_a_spectrum) {
        const double grid[1] = {pt.delta};
        const auto s = omit_spectrum(pt.params, pt.drive.G_b, pt.drive.G_m, pt.drive.detuning_case, grid);
        if (s.gain_exceeds_loss || s.unstable_response) return {std::nullopt, CellStatus::threshold};
        return {s.points.front().p_a, CellStatus::ok};
    }
    const DriftModel drift = build_drift(pt.params, pt.drive);
    if (!stability(drift).stable) return {std::nullopt, CellStatus::unstable};
    switch (spec.observable) {
        case Observable::stability: return {1.0, CellStatus::ok};
        case Observable::E_N: return {log_negativity(steady_covariance(drift)), CellStatus::ok};
        case Observable::n_f: return {thermal_occupation(steady_covariance(drift)), CellStatus::ok};
        case Observable::ratio: {
            DriveConfig bare = pt.drive;
            bare.G_b = 0.0;
            const DriftModel ref = build_drift(pt.params, bare);
            if (!stability(ref).stable) return {std::nullopt, CellStatus::unstable};
            const double n_f = thermal_occupation(steady_covariance(drift));
            const double n_ref = thermal_occupation(steady_covariance(ref));
            return {n_ref / n_f, CellStatus::ok};
        }
        case Observable::P_a_spectrum: break;
    }
    return {std::nullopt, CellStatus::threshold};
}

}  // namespace detail

/**
 * @brief Evaluate the observable on every grid cell.
 *
 * Unstable cells are flagged and left empty; they never abort the sweep.
 * @throws InvalidSpec for unknown axes, empty grids or inconsistent observables
 */
[[nodiscard]] inline SweepResult run_sweep(const SweepSpec& spec, SweepOptions opts = {}) {
    spec.validate();
    SweepResult res;
    res.axes = spec.axes;
    std::size_t total = 1;
    for (const auto& a : spec.axes) {
        res.axis_values.push_back(a.values());
        total *= a.count;
    }
    res.values.assign(total, std::nullopt);
    res.flags.assign(total, CellStatus::ok);

    std::optional<std::size_t> t_axis;
    for (std::size_t a = 0; a < spec.axes.size(); ++a)
        if (spec.axes[a].name == "t") t_axis = a;

    // A unit of work is one cell, or with a "t" axis, one trajectory over all t values.
    std::vector<std::size_t> units;
    for (std::size_t f = 0; f < total; ++f) {
        if (!t_axis || res.unflatten(f)[*t_axis] == 0) units.push_back(f);
    }

    auto run_unit = [&](std::size_t flat) {
        auto idx = res.unflatten(flat);
        const CellPoint pt = detail::apply_axes(spec, res.axis_values, idx);
        if (!t_axis) {
            const auto cv = detail::evaluate_static(spec, pt);
            res.values[flat] = cv.value;
            res.flags[flat] = cv.status;
            return;
        }
        const auto& times = res.axis_values[*t_axis];
        const DriftModel drift = build_drift(pt.params, pt.drive);
        const bool stable = stability(drift).stable;
        std::vector<double> grid;
        const bool prepend = times.front() > 0.0;
        if (prepend) grid.push_back(0.0);
        grid.insert(grid.end(), times.begin(), times.end());
        std::vector<CovarianceMatrix> traj;
        if (stable) traj = evolve_covariance(drift, equilibrium_initial_state(pt.params), grid);
        for (std::size_t k = 0; k < times.size(); ++k) {
            idx[*t_axis] = k;
            const std::size_t f = res.flat_index(idx);
            if (!stable) {
                res.flags[f] = CellStatus::unstable;
                continue;
            }
            res.values[f] = log_negativity(traj[k + (prepend ? 1 : 0)]);
        }
    };

    const unsigned threads = std::max(1U, std::min<unsigned>(opts.threads, static_cast<unsigned>(units.size())));
    if (threads == 1) {
        for (std::size_t u : units) run_unit(u);
        return res;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = next++; i < units.size(); i = next++) run_unit(units[i]);
            } catch (...) {
                errors[w] = std::current_exception();
                next = units.size();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return res;
}

enum class Sense { min, max };

struct Optimum {
    std::vector<std::size_t> indices;
    std::vector<double> coords;
    double value = 0.0;
};

/**
 * @brief Extremal ok cell; ties go to the first cell in row-major order.
 * @throws AllCellsUnstable if no cell carries a value
 */
[[nodiscard]] inline Optimum find_optimum(const SweepResult& r, Sense sense) {
    std::optional<std::size_t> best;
    for (std::size_t f = 0; f < r.size(); ++f) {
        if (r.flags[f] != CellStatus::ok || !r.values[f]) continue;
        const double v = *r.values[f];
        if (!best) {
            best = f;
            continue;
        }
        const double b = *r.values[*best];
        if (sense == Sense::max ? v > b : v < b) best = f;
    }
    if (!best) throw AllCellsUnstable("find_optimum: no ok cell in sweep");
    Optimum o;
    o.indices = r.unflatten(*best);
    for (std::size_t a = 0; a < r.axes.size(); ++a) o.coords.push_back(r.axis_values[a][o.indices[a]]);
    o.value = *r.values[*best];
    return o;
}

}  // namespace omdiss
