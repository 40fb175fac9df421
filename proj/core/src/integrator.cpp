#include "bodymass/integrator.hpp"

#include <string>

namespace bodymass {

BodyComposition step(const BodyComposition& x, const ControlInput& u, const MacroIntake& m,
                     const ModelParams& p, double dt, Integrator method, Fidelity fidelity,
                     double r_scale) {
    return integrate_step(
        [&](double, const BodyComposition& s) { return plant_rhs(s, u, m, p, fidelity, r_scale); },
        x, 0.0, dt, method);
}

std::string_view to_string(Integrator m) noexcept { return m == Integrator::Euler ? "euler" : "rk4"; }

std::string_view to_string(Fidelity f) noexcept {
    return f == Fidelity::Full ? "full" : "simplified";
}

Integrator parse_integrator(std::string_view s) {
    if (s == "euler") return Integrator::Euler;
    if (s == "rk4") return Integrator::RK4;
    throw std::invalid_argument("unknown integrator '" + std::string(s) + "' (euler|rk4)");
}

Fidelity parse_fidelity(std::string_view s) {
    if (s == "full") return Fidelity::Full;
    if (s == "simplified") return Fidelity::Simplified;
    throw std::invalid_argument("unknown fidelity '" + std::string(s) + "' (full|simplified)");
}

} // namespace bodymass
