#pragma once

#include <optional>

namespace bodymass {

// Output error convention, used everywhere: e_y = y - y_d. During weight loss
// e_y >= 0.

/// Saturate an activity command to [0, delta_max]; `clamped` reports whether
/// the limit was hit.
struct ClampResult {
    double value = 0.0;
    bool clamped = false;
};
[[nodiscard]] ClampResult clamp_delta(double delta, double delta_max) noexcept;

struct TdcConfig {
    double gbar = -0.1;  // nominal input gain of dy/dt with respect to delta
    double pi_gain = 10.0;
    double delta0 = 4.0; // command issued on the first call
    double delta_max = 25.0;
};

/// Time-delayed control history: the previous command and output sample.
struct TdcState {
    double prev_u = 0.0;
    double prev_y = 0.0;
    bool initialized = false;
};

/// u = u(t - D) + (y_d_dot - y_dot(t - D) - Pi e_y) / gbar, unclamped.
/// Throws std::invalid_argument if gbar == 0.
[[nodiscard]] double tdc_law(double prev_u, double gbar, double pi_gain, double y_d_dot,
                             double y_dot_prev, double e_y);

class TdcController {
public:
    explicit TdcController(TdcConfig cfg);

    /// One control update from the current output sample. The delayed output
    /// derivative is the backward difference (y - y_prev) / dt. The first call
    /// returns delta0 and only records history.
    ClampResult update(double y, double y_d_dot, double e_y, double dt);

    [[nodiscard]] const TdcState& state() const noexcept { return state_; }
    [[nodiscard]] const TdcConfig& config() const noexcept { return cfg_; }

private:
    TdcConfig cfg_;
    TdcState state_;
};

struct SwitchConfig {
    double delta0 = 4.0;
    double k1_gain = 0.5;
    double xi = 1.0;
    double k2_gain = 0.7;
    double k3_gain = 0.003;
    double delta_max = 25.0;
    /// Accumulate the PI integral only on steps where the PI branch is selected.
    bool conditional_integration = true;
};

struct SwitchState {
    double y0 = 0.0;
    double integral = 0.0; // kg day
    bool switched = false;
    std::optional<int> switch_day;
};

struct SwitchOutput {
    double delta = 0.0;
    double delta_inc = 0.0;
    double delta_pi = 0.0;
    bool pi_selected = false;
    bool clamped = false;
};

/// delta_INC = delta0 + k1 max(y0 - y, 0)^xi.
[[nodiscard]] double delta_increment(const SwitchConfig& cfg, double y0, double y);

/// Ramp / PI switching regulator. Each call selects delta_PI when
/// delta_INC > delta_PI, otherwise delta_INC, so the command is
/// min(delta_INC, delta_PI) before saturation. The integral uses the left
/// rectangle rule: the current error enters after the command is formed.
class SwitchingController {
public:
    SwitchingController(SwitchConfig cfg, double y0);

    SwitchOutput update(double y, double e_y, double dt, int day);

    [[nodiscard]] const SwitchState& state() const noexcept { return state_; }
    [[nodiscard]] const SwitchConfig& config() const noexcept { return cfg_; }

private:
    SwitchConfig cfg_;
    SwitchState state_;
};

} // namespace bodymass
