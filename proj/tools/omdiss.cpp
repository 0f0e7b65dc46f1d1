// omdiss: run scenario files and figure presets, writing <name>.csv and <name>.meta.json.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "omdiss/omdiss.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitAllUnstable = 3;

unsigned thread_count() {
    unsigned n = std::max(1U, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("OMDISS_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && cap >= 1) {
            n = std::min(n, static_cast<unsigned>(cap));
        } else {
            std::cerr << "warning: ignoring OMDISS_THREADS='" << env << "'\n";
        }
    }
    return n;
}

ordered_json params_hz(const omdiss::PhysicalParams& p) {
    using omdiss::hertz;
    return ordered_json{
        {"kappa_j_hz", hertz(p.kappa_j)},
        {"kappa_k_hz", hertz(p.kappa_k)},
        {"kappa_j_ex_hz", hertz(p.kappa_j_ex)},
        {"kappa_k_ex_hz", hertz(p.kappa_k_ex)},
        {"gamma_b_hz", hertz(p.gamma_b)},
        {"gamma_m_hz", hertz(p.gamma_m)},
        {"omega_b_hz", hertz(p.omega_b)},
        {"omega_m_hz", hertz(p.omega_m)},
        {"g_b_hz", hertz(p.g_b)},
        {"g_m_j_hz", hertz(p.g_m_j)},
        {"g_m_k_hz", hertz(p.g_m_k)},
        {"n_m", p.n_m},
        {"n_b", p.n_b},
    };
}

ordered_json drive_hz(const omdiss::DriveConfig& d) {
    using omdiss::hertz;
    return ordered_json{
        {"case", std::string(omdiss::to_string(d.detuning_case))},
        {"G_b_hz", hertz(d.G_b)},
        {"G_m_hz", hertz(d.G_m)},
        {"delta_j_hz", hertz(d.delta_j)},
        {"delta_k_hz", hertz(d.delta_k)},
        {"delta_b_hz", hertz(d.delta_b)},
    };
}

/// What to run: exactly one of scenario or preset is set.
struct Job {
    std::optional<omdiss::Scenario> scenario;
    const omdiss::Preset* preset = nullptr;

    [[nodiscard]] std::string name() const { return preset ? std::string(preset->name) : scenario->name; }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw omdiss::Error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

const omdiss::Preset& require_preset(const std::string& name) {
    if (const auto* p = omdiss::find_preset(name)) return *p;
    std::string known;
    for (const auto& p : omdiss::all_presets()) known += (known.empty() ? "" : ", ") + std::string(p.name);
    throw omdiss::ValidationError("unknown preset '" + name + "' (known: " + known + ")");
}

/// A scenario file, or a .meta.json written by an earlier run.
Job load_job(const std::string& path) {
    Job job;
    if (path.size() >= 5 && path.ends_with(".json")) {
        ordered_json meta;
        try {
            meta = ordered_json::parse(read_file(path));
        } catch (const ordered_json::parse_error& e) {
            throw omdiss::ValidationError("'" + path + "' is not valid JSON: " + e.what());
        }
        if (meta.contains("preset")) {
            job.preset = &require_preset(meta.at("preset").get<std::string>());
        } else if (meta.contains("scenario")) {
            job.scenario = omdiss::parse_scenario_text(meta.at("scenario").get<std::string>());
        } else {
            throw omdiss::ValidationError("'" + path + "' has neither a 'preset' nor a 'scenario' entry");
        }
        return job;
    }
    job.scenario = omdiss::parse_scenario(path);
    return job;
}

int execute(const Job& job, const fs::path& out_dir) {
    const unsigned threads = thread_count();
    const auto start = std::chrono::steady_clock::now();
    const omdiss::RunResult result =
        job.preset ? job.preset->run(omdiss::SweepOptions{threads}) : omdiss::execute(*job.scenario, {threads});
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    fs::create_directories(out_dir);
    const std::string name = job.name();
    ordered_json outputs = ordered_json::array();
    for (const auto& t : result.tables) {
        const std::string file = name + (t.suffix.empty() ? "" : "_" + t.suffix) + ".csv";
        std::ofstream os(out_dir / file, std::ios::binary);
        t.table.write_csv(os);
        if (!os) throw omdiss::Error("failed to write " + (out_dir / file).string());
        outputs.push_back(file);
    }

    ordered_json meta;
    meta["tool"] = "omdiss";
    meta["version"] = omdiss::kVersion;
    meta["name"] = name;
    if (job.preset) {
        meta["preset"] = std::string(job.preset->name);
        meta["description"] = std::string(job.preset->description);
        meta["resolved_params_hz"] = params_hz(job.preset->params);
    } else {
        const auto& s = *job.scenario;
        const auto p = s.params.resolve();
        meta["task"] = std::string(omdiss::to_string(s.task));
        meta["scenario"] = omdiss::to_ini(s);
        meta["resolved_params_hz"] = params_hz(p);
        meta["resolved_drive"] = drive_hz(s.drive.resolve(p));
    }
    meta["outputs"] = outputs;
    meta["all_unstable"] = result.all_unstable;
    meta["warnings"] = result.warnings;
    meta["threads"] = threads;
    meta["wall_time_s"] = wall;
    {
        std::ofstream os(out_dir / (name + ".meta.json"), std::ios::binary);
        os << meta.dump(2) << '\n';
        if (!os) throw omdiss::Error("failed to write metadata");
    }

    for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
    for (const auto& f : outputs) std::cout << (out_dir / f.get<std::string>()).string() << '\n';
    if (result.all_unstable) {
        std::cerr << "error: every evaluated cell is unstable or past threshold\n";
        return kExitAllUnstable;
    }
    return kExitOk;
}

template<class F>
int guarded(F&& f) {
    try {
        return f();
    } catch (const omdiss::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const omdiss::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const omdiss::InvalidSpec& e) {
        std::cerr << "invalid sweep: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const omdiss::InvalidConfiguration& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const omdiss::AllCellsUnstable& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitAllUnstable;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dissipation-engineered optomechanics: spectra, covariance dynamics, entanglement and cooling"};
    app.set_version_flag("--version", std::string("omdiss ") + omdiss::kVersion);
    app.require_subcommand(1);

    std::string file, preset_name, out_dir = ".";
    bool list = false;

    auto* run = app.add_subcommand("run", "run a scenario file (or re-run a .meta.json)");
    run->add_option("file", file, "scenario file or <name>.meta.json")->required();
    run->add_option("--out", out_dir, "output directory");

    auto* preset = app.add_subcommand("preset", "regenerate a figure's data");
    preset->add_option("name", preset_name, "preset name");
    preset->add_option("--out", out_dir, "output directory");
    preset->add_flag("--list", list, "list presets and exit");

    auto* validate = app.add_subcommand("validate", "parse and validate a scenario file");
    validate->add_option("file", file, "scenario file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    if (*run) return guarded([&] { return execute(load_job(file), out_dir); });
    if (*preset) {
        return guarded([&] {
            if (list) {
                for (const auto& p : omdiss::all_presets()) std::cout << p.name << "  " << p.description << '\n';
                return kExitOk;
            }
            if (preset_name.empty()) throw omdiss::ValidationError("preset name required (see --list)");
            Job job;
            job.preset = &require_preset(preset_name);
            return execute(job, out_dir);
        });
    }
    if (*validate) {
        return guarded([&] {
            const auto s = omdiss::parse_scenario(file);
            for (const auto& w : s.validate()) std::cerr << "warning: " << w << '\n';
            std::cout << "ok: " << omdiss::to_string(s.task) << " '" << s.name << "'\n";
            return kExitOk;
        });
    }
    return kExitInvalid;
}
