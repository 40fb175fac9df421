#pragma once

#include <cmath>
#include <stdexcept>
#include <string_view>

#include <Eigen/Core>

#include "bodymass/energy_model.hpp"

namespace bodymass {

enum class Integrator { Euler, RK4 };

// Fixed-step explicit integrators over the three-compartment state. The
// derivative callback receives (time, state) and returns Derivatives; inputs
// are held constant across the step by the caller.

namespace detail {
inline BodyComposition axpy(const BodyComposition& x, const Derivatives& d, double h) {
    return {x.f_kg + h * d.df_dt, x.l_kg + h * d.dl_dt, x.ecf_kg + h * d.decf_dt};
}
} // namespace detail

template <class Rhs>
[[nodiscard]] BodyComposition integrate_step(Rhs&& rhs, const BodyComposition& x, double t,
                                             double dt, Integrator method) {
    if (!(dt > 0.0)) throw std::invalid_argument("integrate_step: dt must be > 0");

    BodyComposition next;
    if (method == Integrator::Euler) {
        next = detail::axpy(x, rhs(t, x), dt);
    } else {
        const Derivatives k1 = rhs(t, x);
        const Derivatives k2 = rhs(t + 0.5 * dt, detail::axpy(x, k1, 0.5 * dt));
        const Derivatives k3 = rhs(t + 0.5 * dt, detail::axpy(x, k2, 0.5 * dt));
        const Derivatives k4 = rhs(t + dt, detail::axpy(x, k3, dt));
        const double w = dt / 6.0;
        next = {x.f_kg + w * (k1.df_dt + 2.0 * k2.df_dt + 2.0 * k3.df_dt + k4.df_dt),
                x.l_kg + w * (k1.dl_dt + 2.0 * k2.dl_dt + 2.0 * k3.dl_dt + k4.dl_dt),
                x.ecf_kg + w * (k1.decf_dt + 2.0 * k2.decf_dt + 2.0 * k3.decf_dt + k4.decf_dt)};
    }
    if (!std::isfinite(next.f_kg) || !std::isfinite(next.l_kg) || !std::isfinite(next.ecf_kg)) {
        throw std::runtime_error("integrate_step: non-finite state");
    }
    return next;
}

/// Same schemes over a plain vector state, used for augmented systems.
template <int N, class Rhs>
[[nodiscard]] Eigen::Matrix<double, N, 1> integrate_vector(Rhs&& rhs,
                                                          const Eigen::Matrix<double, N, 1>& x,
                                                          double t, double dt, Integrator method) {
    if (!(dt > 0.0)) throw std::invalid_argument("integrate_vector: dt must be > 0");
    using V = Eigen::Matrix<double, N, 1>;
    V next;
    if (method == Integrator::Euler) {
        next = x + dt * rhs(t, x);
    } else {
        const V k1 = rhs(t, x);
        const V k2 = rhs(t + 0.5 * dt, V(x + 0.5 * dt * k1));
        const V k3 = rhs(t + 0.5 * dt, V(x + 0.5 * dt * k2));
        const V k4 = rhs(t + dt, V(x + dt * k3));
        next = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    if (!next.allFinite()) throw std::runtime_error("integrate_vector: non-finite state");
    return next;
}

/// Advance the plant one step with zero-order-hold inputs.
[[nodiscard]] BodyComposition step(const BodyComposition& x, const ControlInput& u,
                                   const MacroIntake& m, const ModelParams& p, double dt,
                                   Integrator method, Fidelity fidelity, double r_scale = 1.0);

[[nodiscard]] std::string_view to_string(Integrator m) noexcept;
[[nodiscard]] std::string_view to_string(Fidelity f) noexcept;
[[nodiscard]] Integrator parse_integrator(std::string_view s);
[[nodiscard]] Fidelity parse_fidelity(std::string_view s);

} // namespace bodymass
