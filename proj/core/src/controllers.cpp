#include "bodymass/controllers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bodymass {

ClampResult clamp_delta(double delta, double delta_max) noexcept {
    if (delta < 0.0) return {0.0, true};
    if (delta > delta_max) return {delta_max, true};
    return {delta, false};
}

double tdc_law(double prev_u, double gbar, double pi_gain, double y_d_dot, double y_dot_prev,
               double e_y) {
    if (gbar == 0.0 || !std::isfinite(gbar)) {
        throw std::invalid_argument("tdc: nominal input gain must be finite and nonzero");
    }
    return prev_u + (y_d_dot - y_dot_prev - pi_gain * e_y) / gbar;
}

TdcController::TdcController(TdcConfig cfg) : cfg_{cfg} {
    if (cfg_.gbar == 0.0 || !std::isfinite(cfg_.gbar)) {
        throw std::invalid_argument("tdc: nominal input gain must be finite and nonzero");
    }
    if (!(cfg_.delta_max > 0.0)) throw std::invalid_argument("tdc: delta_max must be > 0");
}

ClampResult TdcController::update(double y, double y_d_dot, double e_y, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("tdc: dt must be > 0");
    if (!state_.initialized) {
        const auto out = clamp_delta(cfg_.delta0, cfg_.delta_max);
        state_ = {out.value, y, true};
        return out;
    }
    const double y_dot_prev = (y - state_.prev_y) / dt;
    const auto out =
        clamp_delta(tdc_law(state_.prev_u, cfg_.gbar, cfg_.pi_gain, y_d_dot, y_dot_prev, e_y),
                    cfg_.delta_max);
    state_.prev_u = out.value;
    state_.prev_y = y;
    return out;
}

double delta_increment(const SwitchConfig& cfg, double y0, double y) {
    const double progress = std::max(0.0, y0 - y);
    return cfg.delta0 + cfg.k1_gain * std::pow(progress, cfg.xi);
}

SwitchingController::SwitchingController(SwitchConfig cfg, double y0) : cfg_{cfg} {
    if (!(cfg_.delta_max > 0.0)) throw std::invalid_argument("switch: delta_max must be > 0");
    if (!std::isfinite(y0)) throw std::invalid_argument("switch: y0 must be finite");
    state_.y0 = y0;
}

SwitchOutput SwitchingController::update(double y, double e_y, double dt, int day) {
    SwitchOutput out;
    out.delta_inc = delta_increment(cfg_, state_.y0, y);
    out.delta_pi = cfg_.k2_gain * e_y + cfg_.k3_gain * state_.integral;
    out.pi_selected = out.delta_inc > out.delta_pi;

    const auto c = clamp_delta(out.pi_selected ? out.delta_pi : out.delta_inc, cfg_.delta_max);
    out.delta = c.value;
    out.clamped = c.clamped;

    if (!cfg_.conditional_integration || out.pi_selected) state_.integral += e_y * dt;
    if (!std::isfinite(state_.integral)) throw std::runtime_error("switch: integral diverged");

    if (out.pi_selected && !state_.switched) {
        state_.switched = true;
        state_.switch_day = day;
    }
    return out;
}

} // namespace bodymass
