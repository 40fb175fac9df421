#include "bodymass_cli/cli.hpp"

#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "bodymass/config.hpp"
#include "bodymass/export.hpp"
#include "bodymass/presets.hpp"

namespace bodymass::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kOutEnv = "BODYMASS_OUT";

struct RunOptions {
    std::vector<std::string> presets;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> days;
    std::string out_dir;
    std::vector<std::string> overrides;
    std::string integrator;
    std::string fidelity;
    std::vector<std::string> plots;
};

// defaults -> preset -> config file -> flags -> overrides
ScenarioConfig resolve(const RunOptions& o, const std::string* preset) {
    ScenarioConfig cfg = preset ? make_preset(*preset) : ScenarioConfig{};
    if (!o.config_path.empty()) cfg = load_config_file(o.config_path, cfg);
    if (o.seed) cfg.disturbance.seed = *o.seed;
    if (o.days) cfg.days = *o.days;
    if (!o.integrator.empty()) cfg.integrator = parse_integrator(o.integrator);
    if (!o.fidelity.empty()) cfg.plant_fidelity = parse_fidelity(o.fidelity);
    for (const auto& kv : o.overrides) {
        const auto [k, v] = split_override(kv);
        apply_setting(cfg, k, v);
    }
    return cfg;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
    f << content;
    f.close();
    if (!f) throw std::runtime_error("write failed for '" + path.string() + "'");
}

struct Outcome {
    std::string name;
    std::string summary;
    std::string error;
};

Outcome run_one(const ScenarioConfig& cfg, const fs::path& dir, const std::vector<PlotKind>& plots) {
    Outcome res{cfg.name, {}, {}};
    try {
        const SimLog log = run_scenario(cfg);
        std::ostringstream csv;
        write_csv(csv, log);
        write_file(dir / (cfg.name + ".csv"), csv.str());
        const std::string json = summary_json(log);
        write_file(dir / (cfg.name + ".json"), json);
        for (PlotKind k : plots) {
            std::ostringstream tab;
            emit_plotdata(tab, log, k);
            write_file(dir / (cfg.name + "." + std::string(to_string(k)) + ".dat"), tab.str());
        }
        std::ostringstream line;
        line << cfg.name << ": final BM " << format_double(log.final_state.bm()) << " kg, F "
             << format_double(log.final_state.f_kg) << " kg -> " << (dir / (cfg.name + ".csv")).string();
        res.summary = line.str();
    } catch (const std::exception& e) {
        res.error = cfg.name + ": " + e.what();
    }
    return res;
}

int do_run(const RunOptions& o, std::ostream& out, std::ostream& err) {
    std::vector<ScenarioConfig> cfgs;
    std::vector<PlotKind> plots;
    fs::path dir;
    try {
        if (o.presets.empty()) {
            if (o.config_path.empty()) throw ConfigError("run needs --preset or --config");
            cfgs.push_back(resolve(o, nullptr));
        } else {
            for (const auto& name : o.presets) cfgs.push_back(resolve(o, &name));
        }
        for (std::size_t i = 0; i < cfgs.size(); ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                if (cfgs[i].name == cfgs[j].name) {
                    throw ConfigError("two scenarios share the name '" + cfgs[i].name + "'");
                }
            }
        }
        for (const auto& k : o.plots) plots.push_back(parse_plot_kind(k));

        dir = o.out_dir;
        if (dir.empty()) {
            const char* env = std::getenv(kOutEnv);
            dir = (env && *env) ? fs::path(env) : fs::path("results");
        }
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec || !fs::is_directory(dir)) {
            throw std::runtime_error("output directory '" + dir.string() + "' is not usable");
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    std::vector<Outcome> results(cfgs.size());
    if (cfgs.size() == 1) {
        results[0] = run_one(cfgs[0], dir, plots);
    } else {
        std::vector<std::thread> workers;
        workers.reserve(cfgs.size());
        for (std::size_t i = 0; i < cfgs.size(); ++i) {
            workers.emplace_back([&, i] { results[i] = run_one(cfgs[i], dir, plots); });
        }
        for (auto& w : workers) w.join();
    }

    int rc = 0;
    for (const auto& r : results) {
        if (!r.error.empty()) {
            err << "error: " << r.error << "\n";
            rc = 1;
        } else {
            out << r.summary << "\n";
        }
    }
    return rc;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Body-mass dynamics simulator and controller test bench", "bodymass"};
    app.require_subcommand(1);

    RunOptions ro;
    auto* run = app.add_subcommand("run", "Run one config or a batch of presets");
    run->add_option("--preset", ro.presets, "Built-in scenario (repeatable; batches run in parallel)");
    run->add_option("--config", ro.config_path, "Scenario file (key = value)");
    run->add_option("--seed", ro.seed, "Disturbance seed");
    run->add_option("--days", ro.days, "Number of simulated days")->check(CLI::PositiveNumber);
    run->add_option("--out", ro.out_dir, std::string("Output directory (default $") + kOutEnv + " or ./results)");
    run->add_option("--override", ro.overrides, "key=value applied last (repeatable)");
    run->add_option("--integrator", ro.integrator, "euler | rk4");
    run->add_option("--fidelity", ro.fidelity, "full | simplified");
    run->add_option("--plot", ro.plots, "Also write masses|delta|ei|observer-errors|tracking tables");

    auto* presets = app.add_subcommand("presets", "List built-in scenarios");

    std::string show_preset, show_config;
    std::vector<std::string> show_overrides;
    auto* show = app.add_subcommand("config", "Print the resolved configuration");
    show->add_option("--preset", show_preset, "Built-in scenario");
    show->add_option("--config", show_config, "Scenario file");
    show->add_option("--override", show_overrides, "key=value (repeatable)");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty()) rev.pop_back(); // program name
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    if (*presets) {
        for (auto n : preset_names()) out << n << "\n";
        return 0;
    }
    if (*show) {
        try {
            RunOptions o;
            o.config_path = show_config;
            o.overrides = show_overrides;
            const ScenarioConfig cfg = resolve(o, show_preset.empty() ? nullptr : &show_preset);
            out << dump_config(cfg);
            return 0;
        } catch (const std::exception& e) {
            err << "error: " << e.what() << "\n";
            return 2;
        }
    }
    return do_run(ro, out, err);
}

} // namespace bodymass::cli
