#include "bodymass/presets.hpp"

#include "bodymass/config.hpp"

namespace bodymass {

namespace {

// Activity-coefficient studies: 100 kg subject (F 30, L 45, ECF 25), EI held
// at 3492 kcal/day, randomized intake and activity.
ScenarioConfig activity_base(std::string name) {
    ScenarioConfig c;
    c.name = std::move(name);
    c.initial_state = {30.0, 45.0, 25.0};
    c.initial_estimate = {31.0, 44.0, 26.0};
    c.nominal_ei = 3492.0;
    c.disturbance.ei_coeff = 0.02;
    c.disturbance.delta_coeff = 0.2;
    c.observer_enabled = true;
    c.observer.full_state_measurement = true;
    c.days = 300;
    return c;
}

ScenarioConfig bm_tdc() {
    ScenarioConfig c = activity_base("bm-tdc");
    c.controller = ControllerKind::TDC;
    c.output_selector = {1.0, 1.0, 1.0};
    c.reference = {100.0, -0.05, 70.0, 0.0, 300, false};
    return c;
}

ScenarioConfig bm_switch() {
    ScenarioConfig c = activity_base("bm-switch");
    c.controller = ControllerKind::Switching;
    c.output_selector = {1.0, 1.0, 1.0};
    c.reference = {100.0, 0.0, 70.0, 0.0, 500, true};
    c.days = 500;
    return c;
}

ScenarioConfig fat_tdc() {
    ScenarioConfig c = activity_base("fat-tdc");
    c.controller = ControllerKind::TDC;
    c.output_selector = {1.0, 0.0, 0.0};
    c.reference = {30.0, -0.02, 15.0, 0.0, 300, false};
    return c;
}

ScenarioConfig fat_switch() {
    ScenarioConfig c = activity_base("fat-switch");
    c.controller = ControllerKind::Switching;
    c.output_selector = {1.0, 0.0, 0.0};
    c.reference = {30.0, 0.0, 15.0, 0.0, 500, true};
    c.days = 500;
    return c;
}

// Intake plus activity allocation: body-mass tracking under intake, activity
// and partition uncertainty plus scale noise.
ScenarioConfig alloc_base(std::string name, ControllerKind k) {
    ScenarioConfig c;
    c.name = std::move(name);
    c.controller = k;
    c.output_selector = {1.0, 1.0, 1.0};
    c.reference = {100.0, -0.05, 70.0, 0.0, 300, false};
    c.initial_state = {30.0, 45.0, 25.0};
    c.initial_estimate = c.initial_state;
    c.disturbance.ei_coeff = 0.01;
    c.disturbance.delta_coeff = 0.1;
    c.disturbance.r_coeff = 0.5;
    c.disturbance.bm_noise_kg = 0.1;
    c.observer_enabled = false;
    c.days = 300;
    c.alloc.rho1 = 500.0;
    return c;
}

} // namespace

const std::vector<std::string_view>& preset_names() {
    static const std::vector<std::string_view> names{"bm-tdc",   "bm-switch", "fat-tdc",
                                                     "fat-switch", "alloc-fl", "alloc-smc"};
    return names;
}

ScenarioConfig make_preset(std::string_view name) {
    if (name == "bm-tdc") return bm_tdc();
    if (name == "bm-switch") return bm_switch();
    if (name == "fat-tdc") return fat_tdc();
    if (name == "fat-switch") return fat_switch();
    if (name == "alloc-fl") return alloc_base("alloc-fl", ControllerKind::AllocFL);
    if (name == "alloc-smc") return alloc_base("alloc-smc", ControllerKind::AllocSMC);
    std::string msg = "unknown preset '" + std::string(name) + "' (";
    for (std::size_t i = 0; i < preset_names().size(); ++i) {
        msg += (i ? "|" : "") + std::string(preset_names()[i]);
    }
    throw ConfigError(msg + ")");
}

ScenarioConfig nominal(ScenarioConfig cfg) {
    cfg.disturbance.ei_coeff = 0.0;
    cfg.disturbance.delta_coeff = 0.0;
    cfg.disturbance.r_coeff = 0.0;
    cfg.disturbance.bm_noise_kg = 0.0;
    return cfg;
}

} // namespace bodymass
