#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace bodymass {

/// Three-compartment body composition, all masses in kg.
struct BodyComposition {
    double f_kg = 0.0;   // fat
    double l_kg = 0.0;   // lean
    double ecf_kg = 0.0; // extracellular fluid

    [[nodiscard]] constexpr double bm() const noexcept { return f_kg + l_kg + ecf_kg; }
    [[nodiscard]] bool valid() const noexcept;

    friend constexpr bool operator==(const BodyComposition&, const BodyComposition&) = default;
};

/// Daily macronutrient intake in g/day.
struct MacroIntake {
    double ci_g = 0.0; // carbohydrate
    double fi_g = 0.0; // fat
    double pi_g = 0.0; // protein

    [[nodiscard]] bool valid() const noexcept;
};

/// Plant inputs: energy intake (kcal/day) and physical-activity coefficient
/// delta = PA / BM (kcal/kg/day).
struct ControlInput {
    double ei_kcal = 0.0;
    double delta = 0.0;

    [[nodiscard]] bool valid() const noexcept;
};

struct Derivatives {
    double df_dt = 0.0;
    double dl_dt = 0.0;
    double decf_dt = 0.0;
};

enum class Fidelity {
    Full,       // EE keeps the eta_L dL/dt + eta_F dF/dt terms, exact Forbes ratio
    Simplified, // eta terms dropped, Forbes ratio replaced by a + b F
};

/// Physiological constants plus the calibrated quantities (a, b, K, baselines).
///
/// Defaults are the published coefficient set for an adult with
/// F = 30 kg, L = 45 kg, ECF = 25 kg. `a`, `b` are the least-squares fit of the
/// Forbes ratio over F in [10, 60] kg (101 points); `k_const` corresponds to
/// EI = 3500 kcal/day, zero baseline activity. Use `calibrate()` after changing
/// any constant that feeds these.
struct ModelParams {
    double k1 = 4.0; // kcal/g carbohydrate
    double k2 = 9.0; // kcal/g fat
    double k3 = 4.0; // kcal/g protein
    double rho_f = 9400.0;
    double rho_l = 1800.0;
    double kk = 10.4;     // Forbes constant, kg
    double rho_w = 1.0;   // kg/l
    double na = 3.22;     // kg/l
    double zeta_na = 3.0; // kg/d/l
    double zeta_ci = 4.0; // kg/d
    double beta = 0.24;
    double gamma_l = 22.0;
    double gamma_f = 3.2;
    double eta_l = 230.0;
    double eta_f = 180.0;
    double ecf_init = 25.0;
    double z1 = 0.5;     // carbohydrate share of EI
    double ci_b = 437.5; // g/day, z1 * 3500 / k1
    double a = 0.13848653191960598;
    double b = -0.0020775804738302896;
    double k_const = 1574.0;

    /// Forbes parameter c = kk * rho_L / rho_F (kg).
    [[nodiscard]] double c() const noexcept { return kk * rho_l / rho_f; }

    /// Throws std::invalid_argument when an invariant is broken.
    void validate() const;
};

/// Steady-state operating point used to calibrate K and ci_b.
struct Baseline {
    double ei_bar = 3500.0;
    double f_bar = 30.0;
    double l_bar = 45.0;
    double pa_bar = 0.0; // kcal/day
};

struct LinearRatioFit {
    double a = 0.0;
    double b = 0.0;
    double max_residual = 0.0;
};

/// EI = k1 ci + k2 fi + k3 pi.
[[nodiscard]] double energy_intake(const MacroIntake& m, const ModelParams& p);

/// Split an energy intake into macronutrients with carbohydrate share z1
/// (k1 ci = z1 EI); the remainder is divided evenly by energy between fat and
/// protein.
[[nodiscard]] MacroIntake macro_split(double ei_kcal, const ModelParams& p);

/// r = c / (c + F). Throws std::domain_error for negative or non-finite F.
[[nodiscard]] double forbes_ratio(double f_kg, const ModelParams& p);

/// Ordinary least squares of r(F) against a + b F on a uniform grid.
[[nodiscard]] LinearRatioFit fit_linear_ratio(const ModelParams& p, double f_min, double f_max,
                                              std::size_t n_grid);

/// OLS fit of an arbitrary sampled function; shared by fit_linear_ratio.
template <class Fn>
[[nodiscard]] LinearRatioFit fit_affine(Fn&& fn, double x_min, double x_max, std::size_t n_grid);

/// K = (1 - beta) EI - gamma_L L - gamma_F F - PA.
[[nodiscard]] double steady_state_k(const ModelParams& p, double ei_bar, double l_bar, double f_bar,
                                    double pa_bar);

/// Refit (a, b) over [10, 60] kg and recompute K and ci_b from the baseline.
void calibrate(ModelParams& p, const Baseline& base);

/// EE = delta BM + beta EI + K + gamma_L L + eta_L dL + gamma_F F + eta_F dF.
[[nodiscard]] double energy_expenditure(const BodyComposition& x, const Derivatives& d,
                                        const ControlInput& u, const ModelParams& p);

/// EB = EI - EE under the given fidelity (Simplified ignores the rate terms).
[[nodiscard]] double energy_balance(const BodyComposition& x, const Derivatives& d,
                                    const ControlInput& u, const ModelParams& p, Fidelity fidelity);

/// Compartment rates. `r_scale` multiplies the Forbes ratio (Full only) to
/// inject partition uncertainty; the scaled ratio is capped at 1.
[[nodiscard]] Derivatives plant_rhs(const BodyComposition& x, const ControlInput& u,
                                    const MacroIntake& m, const ModelParams& p, Fidelity fidelity,
                                    double r_scale = 1.0);

/// dECF/dt = (rho_w / Na) [zeta_Na (ECF_init - ECF) - zeta_ci (1 - ci / ci_b)].
[[nodiscard]] double ecf_rate(double ecf_kg, double ci_g, const ModelParams& p);

// ---------------------------------------------------------------------------

namespace detail {
void check_fit_grid(double x_min, double x_max, std::size_t n_grid);
}

template <class Fn>
LinearRatioFit fit_affine(Fn&& fn, double x_min, double x_max, std::size_t n_grid) {
    detail::check_fit_grid(x_min, x_max, n_grid);

    const double step = (x_max - x_min) / static_cast<double>(n_grid - 1);
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < n_grid; ++i) {
        const double x = x_min + step * static_cast<double>(i);
        sx += x;
        sy += fn(x);
    }
    const double n = static_cast<double>(n_grid);
    const double mx = sx / n, my = sy / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n_grid; ++i) {
        const double x = x_min + step * static_cast<double>(i);
        sxy += (x - mx) * (fn(x) - my);
        sxx += (x - mx) * (x - mx);
    }
    LinearRatioFit fit;
    fit.b = sxy / sxx;
    fit.a = my - fit.b * mx;
    for (std::size_t i = 0; i < n_grid; ++i) {
        const double x = x_min + step * static_cast<double>(i);
        fit.max_residual = std::max(fit.max_residual, std::abs(fn(x) - (fit.a + fit.b * x)));
    }
    return fit;
}

} // namespace bodymass
