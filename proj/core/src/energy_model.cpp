#include "bodymass/energy_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bodymass {

namespace {

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

void require_state(const BodyComposition& x) {
    if (!x.valid()) {
        throw std::domain_error("body composition must be finite and strictly positive (F=" +
                                std::to_string(x.f_kg) + ", L=" + std::to_string(x.l_kg) +
                                ", ECF=" + std::to_string(x.ecf_kg) + ")");
    }
}

// (1 - beta) EI - delta BM - K - gamma_L L - gamma_F F: the energy balance
// before the rate-dependent eta terms are subtracted.
double static_balance(const BodyComposition& x, const ControlInput& u, const ModelParams& p) {
    return (1.0 - p.beta) * u.ei_kcal - u.delta * x.bm() - p.k_const - p.gamma_l * x.l_kg -
           p.gamma_f * x.f_kg;
}

} // namespace

bool BodyComposition::valid() const noexcept {
    return std::isfinite(f_kg) && std::isfinite(l_kg) && std::isfinite(ecf_kg) && f_kg > 0.0 &&
           l_kg > 0.0 && ecf_kg > 0.0;
}

bool MacroIntake::valid() const noexcept {
    return finite_nonneg(ci_g) && finite_nonneg(fi_g) && finite_nonneg(pi_g);
}

bool ControlInput::valid() const noexcept { return finite_nonneg(ei_kcal) && finite_nonneg(delta); }

void ModelParams::validate() const {
    if (!(rho_f > 0.0) || !(rho_l > 0.0)) throw std::invalid_argument("rho_f and rho_l must be > 0");
    if (!(beta >= 0.0 && beta < 1.0)) throw std::invalid_argument("beta must be in [0, 1)");
    if (!(z1 >= 0.0 && z1 <= 1.0)) throw std::invalid_argument("z1 must be in [0, 1]");
    if (!(kk > 0.0)) throw std::invalid_argument("kk must be > 0");
    if (!(na > 0.0)) throw std::invalid_argument("na must be > 0");
    if (!(ci_b > 0.0)) throw std::invalid_argument("ci_b must be > 0");
    if (!(k1 > 0.0)) throw std::invalid_argument("k1 must be > 0");
    for (double v : {k2, k3, rho_w, zeta_na, zeta_ci, gamma_l, gamma_f, eta_l, eta_f, ecf_init, a, b,
                     k_const}) {
        if (!std::isfinite(v)) throw std::invalid_argument("model parameter is not finite");
    }
}

double energy_intake(const MacroIntake& m, const ModelParams& p) {
    return p.k1 * m.ci_g + p.k2 * m.fi_g + p.k3 * m.pi_g;
}

MacroIntake macro_split(double ei_kcal, const ModelParams& p) {
    const double rest = (1.0 - p.z1) * ei_kcal;
    return {p.z1 * ei_kcal / p.k1, 0.5 * rest / p.k2, 0.5 * rest / p.k3};
}

double forbes_ratio(double f_kg, const ModelParams& p) {
    if (!std::isfinite(f_kg) || f_kg < 0.0) {
        throw std::domain_error("forbes_ratio: fat mass must be finite and >= 0");
    }
    const double c = p.c();
    return c / (c + f_kg);
}

namespace detail {
void check_fit_grid(double x_min, double x_max, std::size_t n_grid) {
    if (n_grid < 2) throw std::invalid_argument("fit grid needs at least 2 points");
    if (!(x_min < x_max) || !std::isfinite(x_min) || !std::isfinite(x_max)) {
        throw std::invalid_argument("fit grid range is degenerate");
    }
}
} // namespace detail

LinearRatioFit fit_linear_ratio(const ModelParams& p, double f_min, double f_max,
                                std::size_t n_grid) {
    if (!(f_min > 0.0)) throw std::invalid_argument("fit_linear_ratio: f_min must be > 0");
    return fit_affine([&](double f) { return forbes_ratio(f, p); }, f_min, f_max, n_grid);
}

double steady_state_k(const ModelParams& p, double ei_bar, double l_bar, double f_bar,
                      double pa_bar) {
    return (1.0 - p.beta) * ei_bar - p.gamma_l * l_bar - p.gamma_f * f_bar - pa_bar;
}

void calibrate(ModelParams& p, const Baseline& base) {
    const auto fit = fit_linear_ratio(p, 10.0, 60.0, 101);
    p.a = fit.a;
    p.b = fit.b;
    p.k_const = steady_state_k(p, base.ei_bar, base.l_bar, base.f_bar, base.pa_bar);
    p.ci_b = p.z1 * base.ei_bar / p.k1;
    p.validate();
}

double energy_expenditure(const BodyComposition& x, const Derivatives& d, const ControlInput& u,
                          const ModelParams& p) {
    return u.delta * x.bm() + p.beta * u.ei_kcal + p.k_const + p.gamma_l * x.l_kg +
           p.eta_l * d.dl_dt + p.gamma_f * x.f_kg + p.eta_f * d.df_dt;
}

double energy_balance(const BodyComposition& x, const Derivatives& d, const ControlInput& u,
                      const ModelParams& p, Fidelity fidelity) {
    if (fidelity == Fidelity::Simplified) return static_balance(x, u, p);
    return u.ei_kcal - energy_expenditure(x, d, u, p);
}

double ecf_rate(double ecf_kg, double ci_g, const ModelParams& p) {
    return (p.rho_w / p.na) *
           (p.zeta_na * (p.ecf_init - ecf_kg) - p.zeta_ci * (1.0 - ci_g / p.ci_b));
}

Derivatives plant_rhs(const BodyComposition& x, const ControlInput& u, const MacroIntake& m,
                      const ModelParams& p, Fidelity fidelity, double r_scale) {
    require_state(x);
    const double e0 = static_balance(x, u, p);

    Derivatives d;
    d.decf_dt = ecf_rate(x.ecf_kg, m.ci_g, p);

    if (fidelity == Fidelity::Simplified) {
        const double r = p.a + p.b * x.f_kg;
        d.df_dt = (1.0 - r) * e0 / p.rho_f;
        d.dl_dt = r * e0 / p.rho_l;
        return d;
    }

    const double r = std::min(1.0, forbes_ratio(x.f_kg, p) * r_scale);
    // rho_F dF = (1 - r)(E0 - eta_L dL - eta_F dF)
    // rho_L dL = r (E0 - eta_L dL - eta_F dF)
    const double m11 = p.rho_f + (1.0 - r) * p.eta_f;
    const double m12 = (1.0 - r) * p.eta_l;
    const double m21 = r * p.eta_f;
    const double m22 = p.rho_l + r * p.eta_l;
    const double det = m11 * m22 - m12 * m21;
    if (!(std::abs(det) > 1e-12 * std::abs(m11 * m22))) {
        throw std::runtime_error("plant_rhs: singular partition system");
    }
    const double rhs1 = (1.0 - r) * e0;
    const double rhs2 = r * e0;
    d.df_dt = (rhs1 * m22 - m12 * rhs2) / det;
    d.dl_dt = (m11 * rhs2 - m21 * rhs1) / det;
    return d;
}

} // namespace bodymass
