#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bodymass/allocator.hpp"
#include "bodymass/controllers.hpp"
#include "bodymass/disturbance.hpp"
#include "bodymass/energy_model.hpp"
#include "bodymass/integrator.hpp"
#include "bodymass/observer.hpp"
#include "bodymass/reference.hpp"

namespace bodymass {

enum class ControllerKind { Open, TDC, Switching, AllocFL, AllocSMC };

[[nodiscard]] std::string_view to_string(ControllerKind k) noexcept;
[[nodiscard]] ControllerKind parse_controller(std::string_view s);

struct ScenarioConfig {
    std::string name = "custom";
    ControllerKind controller = ControllerKind::TDC;
    std::array<double, 3> output_selector{1.0, 1.0, 1.0};
    ReferenceSpec reference;
    DisturbanceSpec disturbance;
    BodyComposition initial_state{30.0, 45.0, 25.0};
    BodyComposition initial_estimate{31.0, 44.0, 26.0};
    int days = 300;
    double dt_days = 1.0;
    Integrator integrator = Integrator::RK4;
    Fidelity plant_fidelity = Fidelity::Full;

    ModelParams params;
    Baseline baseline;
    bool auto_calibrate = true; // refit a, b, K, ci_b from `baseline` before running

    double nominal_ei = 3492.0; // EI fed to the plant when activity is the only input
    double open_delta = 0.0;    // delta used by the open-loop controller

    bool observer_enabled = false;
    ObserverConfig observer;
    TdcConfig tdc;
    SwitchConfig switching;
    AllocConfig alloc;

    void validate() const;
    [[nodiscard]] bool output_is_body_mass() const noexcept {
        return output_selector == std::array<double, 3>{1.0, 1.0, 1.0};
    }
};

/// One simulated day; inputs are held over [t, t + dt).
struct SimRecord {
    int day = 0;
    double t = 0.0;
    BodyComposition x;
    BodyComposition xhat;
    double y = 0.0; // output value the controller acted on
    double y_d = 0.0;
    double y_d_dot = 0.0;
    double e_y = 0.0;
    ControlInput u_cmd;
    ControlInput u_applied;
    double ee = 0.0;
    double eb = 0.0;
    double q = 0.0;
    double r_scale = 1.0;
    bool clamped = false;
    bool pi_selected = false;
    bool full_measurement = false;
    // allocator diagnostics (zero for the activity-only controllers)
    std::optional<QpStatus> qp_status;
    double sliding_s = 0.0;
    double qp_objective = 0.0;
    double ei_lower = 0.0;
    double ei_upper = 0.0;
    bool ei_at_lower = false;
    double partition_residual = 0.0; // max over the step's rhs evaluations, relative to max(1, |EB|)
};

struct SimLog {
    std::string name;
    std::uint64_t seed = 0;
    std::vector<SimRecord> records;
    BodyComposition final_state;
    BodyComposition final_estimate;
    std::optional<int> switch_day;
    int clamp_events = 0;
    int qp_optimal = 0;
    int qp_relaxed = 0;
    ModelParams params; // parameters after calibration
};

/// Error raised inside the daily loop, tagged with the failing day.
class SimulationError : public std::runtime_error {
public:
    SimulationError(int day, const std::string& what)
        : std::runtime_error("day " + std::to_string(day) + ": " + what), day_{day} {}
    [[nodiscard]] int day() const noexcept { return day_; }

private:
    int day_;
};

/// Run the daily measure / estimate / control / disturb / integrate loop.
/// Deterministic in (cfg, cfg.disturbance.seed).
[[nodiscard]] SimLog run_scenario(const ScenarioConfig& cfg);

} // namespace bodymass
