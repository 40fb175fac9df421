#include "doctest.h"

#include <algorithm>
#include <sstream>

#include "bodymass/config.hpp"
#include "bodymass/export.hpp"
#include "bodymass/presets.hpp"

using namespace bodymass;

TEST_CASE("key resolution") {
    CHECK(resolve_key("alloc.rho1") == "alloc.rho1");
    CHECK(resolve_key("rho1") == "alloc.rho1");
    CHECK(resolve_key("days") == "days");
    CHECK_THROWS_AS((void)resolve_key("nope"), ConfigError);
    try {
        (void)resolve_key("delta_max");
        FAIL("ambiguous key accepted");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("tdc.delta_max") != std::string::npos);
        CHECK(msg.find("alloc.delta_max") != std::string::npos);
    }
}

TEST_CASE("settings round-trip") {
    ScenarioConfig cfg;
    apply_setting(cfg, "reference.yt", "65.5");
    CHECK(cfg.reference.yt == 65.5);
    apply_setting(cfg, "controller", "switching");
    CHECK(cfg.controller == ControllerKind::Switching);
    apply_setting(cfg, "observer.g1", "1, 2, 3");
    CHECK(cfg.observer.g1(2) == 3.0);
    apply_setting(cfg, "alloc.w_mat", "0.5, 200");
    CHECK(cfg.alloc.w_mat(1, 1) == 200.0);
    apply_setting(cfg, "observer_enabled", "true");
    CHECK(cfg.observer_enabled);
    apply_setting(cfg, "params.a", "0.1");
    CHECK(get_setting(cfg, "params.a") == "0.1");
    CHECK_THROWS_AS(apply_setting(cfg, "days", "ten"), ConfigError);
    CHECK_THROWS_AS(apply_setting(cfg, "observer.g1", "1, 2"), ConfigError);
    CHECK_THROWS_AS(apply_setting(cfg, "integrator", "leapfrog"), ConfigError);
}

TEST_CASE("parse_config") {
    const auto cfg = parse_config("# comment\npreset = fat-switch\n\ndays = 42  # trailing\nseed = 7\n");
    CHECK(cfg.name == "fat-switch");
    CHECK(cfg.days == 42);
    CHECK(cfg.disturbance.seed == 7u);
    CHECK(cfg.controller == ControllerKind::Switching);

    try {
        (void)parse_config("days = 3\nthis line is wrong\n", {}, "s.cfg");
        FAIL("malformed line accepted");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("s.cfg:2") != std::string::npos);
    }
    CHECK_THROWS_AS((void)parse_config("days = 3\npreset = bm-tdc\n"), ConfigError);
    CHECK_THROWS_AS((void)parse_config("bogus = 1\n"), ConfigError);
    CHECK_THROWS_AS((void)parse_config("preset = nope\n"), ConfigError);
}

TEST_CASE("dump_config round trip for every preset") {
    for (auto name : preset_names()) {
        const ScenarioConfig cfg = make_preset(name);
        const std::string text = dump_config(cfg);
        CHECK(dump_config(parse_config(text)) == text);
    }
    CHECK(config_keys().size() > 60);
}

TEST_CASE("split_override") {
    CHECK(split_override("rho1=400") == std::pair<std::string, std::string>{"rho1", "400"});
    CHECK(split_override(" a = b=c ").second == "b=c");
    CHECK_THROWS_AS((void)split_override("novalue"), ConfigError);
    CHECK_THROWS_AS((void)split_override("=3"), ConfigError);
}

TEST_CASE("presets") {
    CHECK(preset_names().size() == 6);
    for (auto name : preset_names()) {
        const ScenarioConfig cfg = make_preset(name);
        CHECK(cfg.name == name);
        CHECK_NOTHROW(cfg.validate());
        const ScenarioConfig n = nominal(cfg);
        CHECK_FALSE(n.disturbance.any());
    }
    CHECK_THROWS_AS((void)make_preset("bm"), ConfigError);
}

TEST_CASE("csv layout") {
    ScenarioConfig cfg = make_preset("alloc-smc");
    cfg.days = 3;
    const SimLog log = run_scenario(cfg);
    std::ostringstream os;
    write_csv(os, log);
    std::istringstream in(os.str());
    std::string header, row;
    std::getline(in, header);
    std::string want;
    for (std::size_t i = 0; i < csv_columns().size(); ++i) {
        want += (i ? "," : "") + std::string(csv_columns()[i]);
    }
    CHECK(header == want);
    CHECK(csv_columns().front() == "day");
    CHECK(csv_columns().back() == "partition_residual");
    int rows = 0;
    while (std::getline(in, row)) {
        ++rows;
        CHECK(std::count(row.begin(), row.end(), ',') + 1 == static_cast<long>(csv_columns().size()));
        CHECK(row.find("optimal") != std::string::npos);
    }
    CHECK(rows == 3);
}

TEST_CASE("format_double is shortest round-trip") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(70) == "70");
    CHECK(std::stod(format_double(1.0 / 3)) == 1.0 / 3);
}

TEST_CASE("summary json") {
    ScenarioConfig cfg = nominal(make_preset("bm-switch"));
    const SimLog log = run_scenario(cfg);
    const std::string j = summary_json(log);
    CHECK(j.find("\"schema_version\": 1") == 4);
    CHECK(j.find("\"switch_day\": " + std::to_string(*log.switch_day)) != std::string::npos);
    CHECK(j.find("\"calibration\"") != std::string::npos);

    ScenarioConfig t = nominal(make_preset("bm-tdc"));
    t.days = 5;
    CHECK(summary_json(run_scenario(t)).find("\"switch_day\": null") != std::string::npos);
}

TEST_CASE("plot tables") {
    ScenarioConfig cfg = make_preset("fat-tdc");
    cfg.days = 4;
    const SimLog log = run_scenario(cfg);
    for (auto k : {PlotKind::Masses, PlotKind::Delta, PlotKind::Ei, PlotKind::ObserverErrors,
                   PlotKind::Tracking}) {
        CHECK(parse_plot_kind(to_string(k)) == k);
        std::ostringstream os;
        emit_plotdata(os, log, k);
        const std::string s = os.str();
        CHECK(s.rfind("# t ", 0) == 0);
        CHECK(std::count(s.begin(), s.end(), '\n') == 5);
    }
    CHECK_THROWS((void)parse_plot_kind("histogram"));
}
