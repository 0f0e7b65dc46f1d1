#include <catch_amalgamated.hpp>

#include <cmath>
#include <string>

#include "omdiss/omdiss.hpp"

using namespace omdiss;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinRel;

namespace {

ParseError parse_error_of(const std::string& text) {
    try {
        (void)parse_scenario_text(text);
    } catch (const ParseError& e) {
        return e;
    }
    FAIL("expected a ParseError");
    throw;
}

}  // namespace

TEST_CASE("empty scenario resolves to the default parameter set", "[scenario]") {
    const Scenario s = parse_scenario_text("");
    CHECK(s.task == TaskKind::spectrum);
    CHECK(s == Scenario{});
    const PhysicalParams p = s.params.resolve();
    CHECK_THAT(p.kappa_j, WithinRel(kTwoPi * 2e6, 1e-15));
    CHECK_THAT(p.kappa_k, WithinRel(kTwoPi * 2e6, 1e-15));
    CHECK_THAT(p.gamma_b, WithinRel(kTwoPi * 40e6, 1e-15));
    CHECK_THAT(p.omega_b, WithinRel(kTwoPi * 10e9, 1e-15));
    CHECK_THAT(p.gamma_m, WithinRel(kTwoPi * 10e3, 1e-15));
    CHECK_THAT(p.omega_m, WithinRel(kTwoPi * 100e6, 1e-15));

    const RunResult r = execute(s);
    REQUIRE(r.tables.size() == 1);
    const auto& t = r.tables[0].table;
    CHECK(t.header() == std::vector<std::string>{"delta_hz", "p_a", "flag"});
    CHECK(t.rows().size() == 2001);
    CHECK_FALSE(r.all_unstable);
}

TEST_CASE("omega_m override moves the detuning presets", "[scenario]") {
    const Scenario s = parse_scenario_text("[task]\nkind = steady\n[params]\nomega_m_hz = 50e6\n"
                                           "[drive]\ncase = anti_stokes_red\nG_m_hz = 1e6\n");
    CHECK(s.params.omega_m_hz == 50e6);
    const PhysicalParams p = s.params.resolve();
    const DriveConfig d = s.drive.resolve(p);
    CHECK_THAT(p.omega_m, WithinRel(kTwoPi * 50e6, 1e-15));
    CHECK_THAT(std::abs(d.delta_b), WithinRel(kTwoPi * 50e6, 1e-12));
}

TEST_CASE("invariant violations are ValidationErrors", "[scenario]") {
    CHECK_THROWS_AS(parse_scenario_text("[params]\ngamma_m_hz = -1\n"), ValidationError);
    CHECK_THROWS_AS(parse_scenario_text("[params]\nn_m = -0.5\n"), ValidationError);
    CHECK_THROWS_AS(parse_scenario_text("[grid]\ndelta_min_hz = 1\ndelta_max_hz = -1\n"), ValidationError);
    CHECK_THROWS_AS(parse_scenario_text("[grid]\ncount = 1\n"), ValidationError);
    CHECK_THROWS_AS(parse_scenario_text("[task]\nname = a/b\n"), ValidationError);
    CHECK_THROWS_AS(parse_scenario_text("[task]\nkind = steady\n[drive]\ncase = stokes_red\n"), ValidationError);
    CHECK_THROWS_AS(parse_scenario_text("[task]\nkind = sweep\n"), ValidationError);
    CHECK_THROWS_AS(parse_scenario_text("[task]\nkind = stability-map\n[sweep]\nobservable = n_f\n"
                                        "axis1 = G_b_hz 0 1e6 3\n"),
                    ValidationError);
    CHECK_THROWS_AS(parse_scenario_text("[task]\nkind = sweep\n[sweep]\naxis1 = n_m 0 1 1\n"), InvalidSpec);
}

TEST_CASE("parse errors carry line and field", "[scenario]") {
    SECTION("unknown key") {
        const auto e = parse_error_of("[params]\n\nkappa_x_hz = 1\n");
        CHECK(e.line() == 3);
        CHECK(e.field() == "params.kappa_x_hz");
    }
    SECTION("unknown section") {
        const auto e = parse_error_of("# comment\n[physics]\n");
        CHECK(e.line() == 2);
        CHECK(e.field() == "physics");
    }
    SECTION("duplicate key") {
        const auto e = parse_error_of("[drive]\nG_b_hz = 1\nG_b_hz = 2\n");
        CHECK(e.line() == 3);
        CHECK(e.field() == "drive.G_b_hz");
        CHECK_THAT(std::string(e.what()), ContainsSubstring("line 2"));
    }
    SECTION("bad numbers") {
        CHECK(parse_error_of("[params]\nn_m = 12x\n").field() == "params.n_m");
        CHECK(parse_error_of("[params]\nn_m = nan\n").field() == "params.n_m");
        CHECK(parse_error_of("[params]\nn_m =\n").field() == "params.n_m");
        CHECK(parse_error_of("[grid]\ncount = 2.5\n").field() == "grid.count");
    }
    SECTION("structure") {
        CHECK(parse_error_of("n_m = 1\n").line() == 1);
        CHECK(parse_error_of("[params]\nn_m 1\n").line() == 2);
        CHECK(parse_error_of("[params\n").line() == 1);
        CHECK(parse_error_of("[task]\nkind = fourier\n").field() == "task.kind");
        CHECK(parse_error_of("[drive]\ncase = purple\n").field() == "drive.case");
        CHECK(parse_error_of("[sweep]\naxis2 = n_m 1 2 3\n").field() == "sweep.axis2");
        CHECK(parse_error_of("[sweep]\naxis1 = n_m 1 2\n").field() == "sweep.axis1");
        CHECK(parse_error_of("[sweep]\naxis1 = n_m 1 2 3 cubic\n").field() == "sweep.axis1");
        CHECK(parse_error_of("[sweep]\naxis1 = bogus 0 1 3\n").field() == "sweep.axis1");
    }
}

TEST_CASE("comments and whitespace are ignored", "[scenario]") {
    const Scenario s = parse_scenario_text("  ; header\n[ params ]  # trailing\n   n_m   =  42   ; note\n");
    CHECK(s.params.n_m == 42.0);
}

TEST_CASE("to_ini round-trips losslessly", "[scenario]") {
    Scenario s;
    s.task = TaskKind::sweep;
    s.name = "rt-1.a";
    s.params.kappa_j_hz = 2.1234567890123e6;
    s.params.omega_m_hz = 0.1 + 0.2;
    s.params.n_m = 1.0 / 3.0;
    s.drive.detuning_case = DetuningCase::AntiStokesRed;
    s.drive.G_b_hz = 3.3e6;
    s.drive.G_m_hz = 1e5;
    s.drive.delta_b_hz = -1.0e8 / 7.0;
    s.grid = {-1e6, 2e6, 17};
    s.dynamics = {0.7, 9};
    s.sweep.observable = Observable::n_f;
    s.sweep.axes = {{"G_m_hz", 0.0, 1e6, 4, AxisScale::linear}, {"n_m", 1.0, 1000.0, 5, AxisScale::log}};
    const Scenario back = parse_scenario_text(to_ini(s));
    CHECK(back == s);
    CHECK(to_ini(back) == to_ini(s));
    CHECK(parse_scenario_text(to_ini(Scenario{})) == Scenario{});
}

TEST_CASE("Hz values survive parse, resolve and echo", "[scenario]") {
    const Scenario s = parse_scenario_text("[params]\nkappa_j_hz = 2.5e6\ngamma_m_hz = 12345.678\n"
                                           "omega_m_hz = 1.23456789e8\ng_b_hz = 777.7\n[drive]\nG_b_hz = 3e6\n");
    const PhysicalParams p = s.params.resolve();
    CHECK_THAT(hertz(p.kappa_j), WithinRel(2.5e6, 1e-12));
    CHECK_THAT(hertz(p.gamma_m), WithinRel(12345.678, 1e-12));
    CHECK_THAT(hertz(p.omega_m), WithinRel(1.23456789e8, 1e-12));
    CHECK_THAT(hertz(p.g_b), WithinRel(777.7, 1e-12));
    CHECK_THAT(hertz(s.drive.resolve(p).G_b), WithinRel(3e6, 1e-12));
}

TEST_CASE("sweep scenario converts axes to internal units", "[scenario]") {
    const Scenario s = parse_scenario_text("[task]\nkind = sweep\n[drive]\ncase = anti_stokes_red\n"
                                           "[sweep]\naxis1 = G_m_hz 0 2e6 3\naxis2 = t_us 0 1 2\n");
    const SweepSpec spec = s.sweep_spec();
    REQUIRE(spec.axes.size() == 2);
    CHECK(spec.axes[0].name == "G_m");
    CHECK_THAT(spec.axes[0].values()[2], WithinRel(kTwoPi * 2e6, 1e-15));
    CHECK(spec.axes[1].name == "t");
    CHECK_THAT(spec.axes[1].values()[1], WithinRel(1e-6, 1e-15));
    CHECK(spec.observable == Observable::E_N);
}

TEST_CASE("execute produces the documented tables", "[scenario]") {
    SECTION("omit") {
        const auto r = execute(parse_scenario_text("[task]\nkind = omit\n[drive]\nG_m_hz = 3e4\n[grid]\ncount = 11\n"));
        const auto& t = r.tables.at(0).table;
        CHECK(t.header() == std::vector<std::string>{"delta_hz", "p_a", "p_a_approx", "flag"});
        CHECK(t.rows().size() == 11);
    }
    SECTION("spectrum past threshold is all-unstable") {
        const auto r = execute(parse_scenario_text("[drive]\ncase = stokes_red\nG_b_hz = 5e6\n[grid]\ncount = 5\n"));
        CHECK(r.all_unstable);
        CHECK(std::get<std::string>(r.tables.at(0).table.rows()[0].back()) == "threshold");
    }
    SECTION("dynamics") {
        const auto r = execute(parse_scenario_text("[task]\nkind = dynamics\n[drive]\nG_m_hz = 3e4\nG_b_hz = 4e6\n"
                                                   "[dynamics]\nt_max_us = 1\ncount = 6\n"));
        const auto& t = r.tables.at(0).table;
        CHECK(t.header() == std::vector<std::string>{"t_us", "E_am", "n_f", "flag"});
        REQUIRE(t.rows().size() == 6);
        CHECK(std::get<double>(t.rows()[5][0]) == 1.0);
        CHECK(std::get<double>(t.rows()[0][1]) == 0.0);
    }
    SECTION("unstable steady point") {
        const auto r = execute(parse_scenario_text("[task]\nkind = steady\n[drive]\nG_m_hz = 1e6\n"));
        CHECK(r.all_unstable);
        const auto& row = r.tables.at(0).table.rows().at(0);
        CHECK(std::holds_alternative<std::monostate>(row[0]));
        CHECK(std::get<std::string>(row.back()) == "unstable");
    }
    SECTION("stability map") {
        const auto r = execute(parse_scenario_text("[task]\nkind = stability-map\n[sweep]\n"
                                                   "axis1 = G_m_hz 0 2e5 3\naxis2 = G_b_hz 0 1e7 3\n"));
        const auto& t = r.tables.at(0).table;
        CHECK(t.header() == std::vector<std::string>{"G_m_hz", "G_b_hz", "stable", "flag"});
        CHECK(t.rows().size() == 9);
        CHECK(std::get<double>(t.rows()[0][2]) == 1.0);
        CHECK_FALSE(r.all_unstable);
    }
}

TEST_CASE("CSV formatting", "[table]") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1e-300) == "1e-300");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
    Table t({"a", "b", "c"});
    t.add_row({1.5, {}, std::string("ok")});
    t.add_row({Table::cell(std::nullopt), Table::cell(2.0), std::string("x")});
    CHECK(t.to_csv() == "a,b,c\n1.5,,ok\n,2,x\n");
    CHECK_THROWS_AS(t.add_row({1.0}), std::invalid_argument);
    CHECK_THROWS_AS(Table({}), std::invalid_argument);
}

TEST_CASE("presets are registered under the figure names", "[presets]") {
    const char* names[] = {"fig2a", "fig2bc", "fig3a", "fig3b", "fig3cd", "fig4a",
                           "fig4b", "fig5a", "fig5b", "fig5c", "fig6"};
    REQUIRE(all_presets().size() == std::size(names));
    for (const char* n : names) CHECK(find_preset(n) != nullptr);
    CHECK(find_preset("fig7") == nullptr);
}
