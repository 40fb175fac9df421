#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "bodymass/energy_model.hpp"
#include "bodymass/integrator.hpp"

using namespace bodymass;

namespace {

// Fat/lean rates from the two coupled balance equations, solved here by
// substitution instead of Cramer's rule.
Derivatives full_oracle(const BodyComposition& x, const ControlInput& u, const ModelParams& p,
                        double ci) {
    const double r = p.c() / (p.c() + x.f_kg);
    const double e0 = (1 - p.beta) * u.ei_kcal - u.delta * x.bm() - p.k_const -
                      p.gamma_l * x.l_kg - p.gamma_f * x.f_kg;
    // With E = e0 - eta_L dL - eta_F dF: dF = (1-r)E/rho_F, dL = r E/rho_L, so
    // E (1 + eta_L r / rho_L + eta_F (1-r) / rho_F) = e0.
    const double e = e0 / (1 + p.eta_l * r / p.rho_l + p.eta_f * (1 - r) / p.rho_f);
    Derivatives d;
    d.df_dt = (1 - r) * e / p.rho_f;
    d.dl_dt = r * e / p.rho_l;
    d.decf_dt = p.rho_w / p.na * (p.zeta_na * (p.ecf_init - x.ecf_kg) - p.zeta_ci * (1 - ci / p.ci_b));
    return d;
}

} // namespace

TEST_CASE("energy_intake") {
    ModelParams p;
    CHECK(energy_intake({0, 0, 0}, p) == 0.0);
    CHECK(energy_intake({100, 50, 100}, p) == doctest::Approx(1250.0));
    CHECK(energy_intake({873, 0, 0}, p) == doctest::Approx(3492.0));
}

TEST_CASE("macro_split inverts energy_intake") {
    ModelParams p;
    const MacroIntake m = macro_split(3500.0, p);
    CHECK(energy_intake(m, p) == doctest::Approx(3500.0).epsilon(1e-14));
    CHECK(m.ci_g == doctest::Approx(437.5));
}

TEST_CASE("forbes_ratio") {
    ModelParams p;
    CHECK(forbes_ratio(0.0, p) == 1.0);
    CHECK(p.c() == doctest::Approx(1.99149).epsilon(1e-5));
    CHECK(forbes_ratio(30.0, p) == doctest::Approx(0.06225).epsilon(1e-3));
    CHECK_THROWS_AS((void)forbes_ratio(-1.0, p), std::domain_error);
    CHECK_THROWS_AS((void)forbes_ratio(NAN, p), std::domain_error);

    double prev = forbes_ratio(0.0, p);
    for (double f = 0.5; f <= 100.0; f += 0.5) {
        const double r = forbes_ratio(f, p);
        CHECK(r < prev);
        CHECK(r > 0.0);
        prev = r;
    }
}

TEST_CASE("affine fit recovers an exact line") {
    const auto fit = fit_affine([](double f) { return 0.1 - 0.001 * f; }, 10.0, 60.0, 101);
    CHECK(fit.a == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(fit.b == doctest::Approx(-0.001).epsilon(1e-12));
    CHECK(fit.max_residual < 1e-15);
    CHECK_THROWS_AS((void)fit_affine([](double) { return 0.0; }, 1.0, 1.0, 10), std::invalid_argument);
    CHECK_THROWS_AS((void)fit_affine([](double) { return 0.0; }, 0.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("frozen ratio fit matches the reference grid") {
    ModelParams p;
    const auto fit = fit_linear_ratio(p, 10.0, 60.0, 101);
    CHECK(fit.a == doctest::Approx(p.a).epsilon(1e-14));
    CHECK(fit.b == doctest::Approx(p.b).epsilon(1e-14));
    CHECK(fit.max_residual == doctest::Approx(0.0483645).epsilon(1e-5));

    // normal equations: residuals sum to zero and are orthogonal to F
    double s = 0, sf = 0;
    for (int i = 0; i <= 100; ++i) {
        const double f = 10.0 + 0.5 * i;
        const double res = forbes_ratio(f, p) - (fit.a + fit.b * f);
        s += res;
        sf += res * f;
    }
    CHECK(std::abs(s) < 1e-12);
    CHECK(std::abs(sf) < 1e-10);
}

TEST_CASE("steady_state_k") {
    ModelParams p;
    CHECK(steady_state_k(p, 3500, 45, 30, 400) == doctest::Approx(1174.0));
    CHECK(steady_state_k(p, 3500, 45, 30, 0) == doctest::Approx(1574.0));
    ModelParams z = p;
    z.beta = 0;
    CHECK(steady_state_k(z, 0, 0, 0, 0) == 0.0);
    CHECK(steady_state_k(p, 0, 45, 30, 400) == doctest::Approx(-22.0 * 45 - 3.2 * 30 - 400));
}

TEST_CASE("calibrate reproduces the frozen defaults") {
    ModelParams p;
    const ModelParams frozen = p;
    calibrate(p, Baseline{});
    CHECK(p.a == doctest::Approx(frozen.a).epsilon(1e-14));
    CHECK(p.b == doctest::Approx(frozen.b).epsilon(1e-14));
    CHECK(p.k_const == doctest::Approx(frozen.k_const));
    CHECK(p.ci_b == doctest::Approx(frozen.ci_b));
}

TEST_CASE("energy_expenditure") {
    ModelParams p;
    p.k_const = 0;
    CHECK(energy_expenditure({30, 45, 25}, {}, {0, 0}, p) == doctest::Approx(1086.0));

    ModelParams q;
    const BodyComposition x{30, 45, 25};
    const ControlInput u{3500, 0};
    CHECK(energy_expenditure(x, {}, u, q) == doctest::Approx(3500.0));
    for (auto fid : {Fidelity::Full, Fidelity::Simplified}) {
        CHECK(std::abs(energy_balance(x, {}, u, q, fid)) < 1e-9);
    }
}

TEST_CASE("zero rates at the calibration steady state") {
    ModelParams p;
    const BodyComposition x{30, 45, 25};
    const ControlInput u{3500, 0};
    const MacroIntake m = macro_split(3500, p);
    for (auto fid : {Fidelity::Full, Fidelity::Simplified}) {
        const auto d = plant_rhs(x, u, m, p, fid);
        CHECK(std::abs(d.df_dt) < 1e-12);
        CHECK(std::abs(d.dl_dt) < 1e-12);
        CHECK(std::abs(d.decf_dt) < 1e-12);
    }
    const auto next = step(x, u, m, p, 1.0, Integrator::RK4, Fidelity::Full);
    CHECK(next.f_kg == doctest::Approx(30.0).epsilon(1e-14));
    CHECK(next.l_kg == doctest::Approx(45.0).epsilon(1e-14));
    CHECK(next.ecf_kg == doctest::Approx(25.0).epsilon(1e-14));
}

TEST_CASE("partition identity holds for random states") {
    ModelParams p;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> f(5, 60), l(30, 70), e(15, 35), ei(1500, 4500), dl(0, 25);
    for (int i = 0; i < 200; ++i) {
        const BodyComposition x{f(rng), l(rng), e(rng)};
        const ControlInput u{ei(rng), dl(rng)};
        const MacroIntake m = macro_split(u.ei_kcal, p);
        for (auto fid : {Fidelity::Full, Fidelity::Simplified}) {
            const Derivatives d = plant_rhs(x, u, m, p, fid);
            const double eb = energy_balance(x, d, u, p, fid);
            const double lhs = p.rho_f * d.df_dt + p.rho_l * d.dl_dt;
            CHECK(std::abs(lhs - eb) <= 1e-12 * std::max(1.0, std::abs(eb)));
        }
    }
}

TEST_CASE("Full rates match an independent solve") {
    ModelParams p;
    const BodyComposition x{22, 48, 24};
    const ControlInput u{2800, 6};
    const MacroIntake m = macro_split(u.ei_kcal, p);
    const auto d = plant_rhs(x, u, m, p, Fidelity::Full);
    const auto o = full_oracle(x, u, p, m.ci_g);
    CHECK(d.df_dt == doctest::Approx(o.df_dt).epsilon(1e-12));
    CHECK(d.dl_dt == doctest::Approx(o.dl_dt).epsilon(1e-12));
    CHECK(d.decf_dt == doctest::Approx(o.decf_dt).epsilon(1e-12));

    const auto s = plant_rhs(x, u, m, p, Fidelity::Simplified);
    CHECK(std::abs(s.df_dt - d.df_dt) > 1e-6);
    CHECK(s.decf_dt == doctest::Approx(d.decf_dt));
}

TEST_CASE("partition scaling affects the Full plant only") {
    ModelParams p;
    const BodyComposition x{30, 45, 25};
    const ControlInput u{3000, 5};
    const MacroIntake m = macro_split(u.ei_kcal, p);
    const auto a = plant_rhs(x, u, m, p, Fidelity::Full, 1.0);
    const auto b = plant_rhs(x, u, m, p, Fidelity::Full, 1.4);
    CHECK(b.dl_dt < a.dl_dt); // more of the deficit taken from lean tissue
    const auto s1 = plant_rhs(x, u, m, p, Fidelity::Simplified, 1.0);
    const auto s2 = plant_rhs(x, u, m, p, Fidelity::Simplified, 1.4);
    CHECK(s1.df_dt == s2.df_dt);
}

TEST_CASE("ECF relaxes exponentially at baseline carbohydrate") {
    ModelParams p;
    const MacroIntake m = macro_split(3500, p);
    const BodyComposition x{30, 45, 26};
    const double rate = p.rho_w / p.na * p.zeta_na;
    BodyComposition y = x;
    const double dt = 0.01;
    for (int i = 0; i < 100; ++i) y = step(y, {3500, 0}, m, p, dt, Integrator::RK4, Fidelity::Full);
    CHECK(y.ecf_kg - 25.0 == doctest::Approx(std::exp(-rate)).epsilon(1e-9));
    // one unit RK4 step carries the fourth-order Taylor polynomial of exp(-h rate)
    const auto z = step(x, {3500, 0}, m, p, 1.0, Integrator::RK4, Fidelity::Full);
    const double h = rate;
    CHECK(z.ecf_kg - 25.0 == doctest::Approx(1 - h + h * h / 2 - h * h * h / 6 + h * h * h * h / 24).epsilon(1e-12));
}

TEST_CASE("invalid inputs are rejected") {
    ModelParams p;
    CHECK_THROWS_AS((void)plant_rhs({-1, 45, 25}, {3500, 0}, {}, p, Fidelity::Full), std::domain_error);
    CHECK_THROWS_AS((void)plant_rhs({30, 45, NAN}, {3500, 0}, {}, p, Fidelity::Full), std::domain_error);
    ModelParams bad = p;
    bad.beta = 1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    CHECK_FALSE(ControlInput{-1, 0}.valid());
    CHECK_FALSE(MacroIntake{0, -1, 0}.valid());
}
