#include <catch_amalgamated.hpp>

#include "omdiss/sweep.hpp"
#include "support/oracles.hpp"

using namespace omdiss;
using Catch::Approx;

namespace {

constexpr double MHz = 1e6;

SweepSpec entanglement_spec(double gm_mhz, std::vector<Axis> axes) {
    SweepSpec s;
    s.params.n_m = 250;
    s.drive = entanglement_preset(s.params, 0.0, angular(gm_mhz * MHz));
    s.axes = std::move(axes);
    s.observable = Observable::E_N;
    return s;
}

}  // namespace

TEST_CASE("Axis values", "[sweep]") {
    const Axis lin{"G_b", 0.0, 1.0, 5, AxisScale::linear};
    CHECK(lin.values() == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    const Axis lg{"n_m", 1.0, 100.0, 3, AxisScale::log};
    const auto v = lg.values();
    CHECK(v[0] == 1.0);
    CHECK(v[1] == Approx(10.0).epsilon(1e-14));
    CHECK(v[2] == 100.0);
}

TEST_CASE("SweepSpec validation", "[sweep]") {
    auto s = entanglement_spec(0.03, {{"G_b", 0.0, 1.0, 3}});
    CHECK_NOTHROW(s.validate());

    auto bad = s;
    bad.axes = {{"kappa", 0.0, 1.0, 3}};
    CHECK_THROWS_AS(run_sweep(bad), InvalidSpec);
    bad.axes = {{"G_b", 0.0, 1.0, 1}};
    CHECK_THROWS_AS(run_sweep(bad), InvalidSpec);
    bad.axes = {};
    CHECK_THROWS_AS(run_sweep(bad), InvalidSpec);
    bad.axes = {{"G_b", 0.0, 1.0, 3}, {"G_b", 0.0, 1.0, 3}};
    CHECK_THROWS_AS(bad.validate(), InvalidSpec);
    bad.axes = {{"G_b", 0.0, 1.0, 3}, {"G_m", 0.0, 1.0, 3}, {"n_m", 0.0, 1.0, 3}};
    CHECK_THROWS_AS(bad.validate(), InvalidSpec);
    bad.axes = {{"n_m", 0.0, 1.0, 3, AxisScale::log}};
    CHECK_THROWS_AS(bad.validate(), InvalidSpec);
    bad.axes = {{"G_b", 2.0, 1.0, 3}};
    CHECK_THROWS_AS(bad.validate(), InvalidSpec);
    bad.axes = {{"delta", 0.0, 1.0, 3}};
    CHECK_THROWS_AS(bad.validate(), InvalidSpec);
    bad.axes = {{"t", 0.0, 1e-6, 3}};
    bad.observable = Observable::n_f;
    CHECK_THROWS_AS(bad.validate(), InvalidSpec);
    bad = s;
    bad.drive = detuning_preset(DetuningCase::StokesRed, s.params);
    CHECK_THROWS_AS(bad.validate(), InvalidSpec);
}

TEST_CASE("degenerate G_b grid reproduces the baseline", "[sweep]") {
    SweepSpec s;
    s.params.n_m = 100;
    s.drive = cooling_preset(s.params, 0.0, angular(1 * MHz));
    s.axes = {{"G_b", 0.0, 0.0, 2}};
    s.observable = Observable::n_f;
    const auto r = run_sweep(s);
    const double base = thermal_occupation(steady_covariance(build_drift(s.params, s.drive)));
    REQUIRE(r.size() == 2);
    CHECK(*r.values[0] == base);
    CHECK(*r.values[1] == base);
}

TEST_CASE("steady E_N over G_b has one interior maximum", "[sweep]") {
    const auto r = run_sweep(entanglement_spec(0.03, {{"G_b", 0.0, angular(10 * MHz), 101}}));
    const auto opt = find_optimum(r, Sense::max);
    CHECK(opt.indices[0] > 0);
    CHECK(opt.indices[0] < 100);
    CHECK(opt.value > 0.0);
    // Rises to the peak then falls: at most one sign change in the increments among the nonzero part.
    int turns = 0;
    for (std::size_t i = 2; i < r.size(); ++i) {
        const double d1 = *r.values[i - 1] - *r.values[i - 2];
        const double d2 = *r.values[i] - *r.values[i - 1];
        if (d1 > 0 && d2 < 0) ++turns;
    }
    CHECK(turns == 1);
}

TEST_CASE("optimum for G_m = 0.05 MHz is interior", "[sweep]") {
    const auto r = run_sweep(entanglement_spec(0.05, {{"G_b", 0.0, angular(10 * MHz), 101}}));
    const auto opt = find_optimum(r, Sense::max);
    CHECK(opt.indices[0] > 0);
    CHECK(opt.indices[0] < 100);
}

TEST_CASE("find_optimum tie-breaking and errors", "[sweep]") {
    SweepResult r;
    r.axes = {{"G_b", 0.0, 1.0, 2}, {"G_m", 0.0, 1.0, 3}};
    r.axis_values = {{0.0, 1.0}, {0.0, 0.5, 1.0}};
    r.values.assign(6, 4.0);
    r.flags.assign(6, CellStatus::ok);
    auto o = find_optimum(r, Sense::max);
    CHECK(o.indices == std::vector<std::size_t>{0, 0});
    CHECK(find_optimum(r, Sense::min).indices == std::vector<std::size_t>{0, 0});

    r.values[0] = std::nullopt;
    r.flags[0] = CellStatus::unstable;
    r.values[4] = 5.0;
    o = find_optimum(r, Sense::max);
    CHECK(o.indices == std::vector<std::size_t>{1, 1});
    CHECK(o.coords == std::vector<double>{1.0, 0.5});
    CHECK(find_optimum(r, Sense::min).indices == std::vector<std::size_t>{0, 1});

    for (std::size_t i = 0; i < 6; ++i) {
        r.values[i] = std::nullopt;
        r.flags[i] = CellStatus::unstable;
    }
    CHECK_THROWS_AS(find_optimum(r, Sense::min), AllCellsUnstable);
}

TEST_CASE("unstable cells carry no value and fail standalone stability", "[sweep][property]") {
    auto s = entanglement_spec(0.0, {{"G_m", 0.0, angular(0.2 * MHz), 21}, {"G_b", 0.0, angular(10 * MHz), 11}});
    s.drive.delta_b = -s.params.omega_m;
    const auto r = run_sweep(s);
    std::size_t unstable = 0;
    for (std::size_t f = 0; f < r.size(); ++f) {
        const auto idx = r.unflatten(f);
        CHECK(r.flat_index(idx) == f);
        const auto pt = detail::apply_axes(s, r.axis_values, idx);
        const auto drift = build_drift(pt.params, pt.drive);
        if (r.flags[f] == CellStatus::unstable) {
            ++unstable;
            CHECK_FALSE(r.values[f].has_value());
            CHECK_FALSE(stability(drift).stable);
            CHECK_FALSE(testing::eigen_stable(drift.m));
        } else {
            CHECK(r.values[f].has_value());
            CHECK(testing::eigen_stable(drift.m));
        }
    }
    CHECK(unstable > 0);
    CHECK(unstable < r.size());
}

TEST_CASE("sweeps are deterministic and thread-count independent", "[sweep][property]") {
    SweepSpec s;
    s.params.n_m = 100;
    s.drive = cooling_preset(s.params, 0.0, 0.0);
    s.axes = {{"G_m", 0.0, angular(20 * MHz), 9}, {"G_b", 0.0, angular(40 * MHz), 9}};
    s.observable = Observable::ratio;
    const auto serial = run_sweep(s);
    CHECK(run_sweep(s) == serial);
    CHECK(run_sweep(s, {4}) == serial);
    CHECK(run_sweep(s, {64}) == serial);
}

TEST_CASE("time axis evaluates dynamic E_N", "[sweep]") {
    auto s = entanglement_spec(0.03, {{"G_b", 0.0, angular(4 * MHz), 2}, {"t", 0.0, 1e-6, 11}});
    const auto r = run_sweep(s, {2});
    REQUIRE(r.size() == 22);
    CHECK(*r.at({0, 0}) == 0.0);
    // the G_b = 0 trace leaves zero and has a positive maximum within the first microsecond
    double peak = 0.0;
    for (std::size_t k = 0; k < 11; ++k) peak = std::max(peak, *r.at({0, k}));
    CHECK(peak > 0.0);

    const auto pt = detail::apply_axes(s, r.axis_values, {1, 0});
    const std::vector<double> grid = r.axis_values[1];
    const auto traj = evolve_covariance(build_drift(pt.params, pt.drive), equilibrium_initial_state(pt.params), grid);
    for (std::size_t k = 0; k < 11; ++k) CHECK(*r.at({1, k}) == log_negativity(traj[k]));
}

TEST_CASE("omega_m axis moves the preset detunings", "[sweep]") {
    SweepSpec s;
    s.drive = cooling_preset(s.params, angular(1 * MHz), angular(0.1 * MHz));
    s.axes = {{"omega_m", angular(50 * MHz), angular(200 * MHz), 3}};
    s.observable = Observable::n_f;
    const auto r = run_sweep(s);
    for (std::size_t i = 0; i < 3; ++i) {
        const auto pt = detail::apply_axes(s, r.axis_values, {i});
        CHECK(pt.drive.delta_j == pt.params.omega_m);
        CHECK(pt.drive.delta_b == pt.params.omega_m);
    }
}

TEST_CASE("P_a spectrum sweep matches omit_spectrum", "[sweep]") {
    SweepSpec s;
    s.drive = detuning_preset(DetuningCase::StokesRed, s.params);
    s.drive.G_m = angular(0.03 * MHz);
    s.drive.G_b = angular(2 * MHz);
    s.axes = {{"delta", angular(-0.01 * MHz), angular(0.01 * MHz), 21}};
    s.observable = Observable::P_a_spectrum;
    const auto r = run_sweep(s);
    const auto spec = omit_spectrum(s.params, s.drive.G_b, s.drive.G_m, s.drive.detuning_case, r.axis_values[0]);
    for (std::size_t i = 0; i < 21; ++i) CHECK(*r.values[i] == spec.points[i].p_a);
}
