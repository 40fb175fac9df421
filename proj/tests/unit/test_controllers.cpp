#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "bodymass/controllers.hpp"

using namespace bodymass;

TEST_CASE("clamp_delta") {
    CHECK(clamp_delta(-1, 25).value == 0.0);
    CHECK(clamp_delta(-1, 25).clamped);
    CHECK(clamp_delta(30, 25).value == 25.0);
    CHECK(clamp_delta(30, 25).clamped);
    CHECK(clamp_delta(7, 25).value == 7.0);
    CHECK_FALSE(clamp_delta(7, 25).clamped);
}

TEST_CASE("time-delayed law") {
    // perfect tracking keeps the previous command
    CHECK(tdc_law(6.5, -0.1, 10, -0.03, -0.03, 0.0) == doctest::Approx(6.5));
    // 5 + (0 - 10 * 0.1) / 0.1 = -5, clamped to 0
    const double u = tdc_law(5, 0.1, 10, 0.2, 0.2, 0.1);
    CHECK(u == doctest::Approx(-5.0));
    CHECK(clamp_delta(u, 25).value == 0.0);
    // with a negative gain the same error raises activity
    CHECK(tdc_law(5, -0.1, 10, 0.2, 0.2, 0.1) == doctest::Approx(15.0));
    CHECK_THROWS_AS((void)tdc_law(5, 0.0, 10, 0, 0, 0), std::invalid_argument);
}

TEST_CASE("TDC first call seeds history") {
    TdcController c(TdcConfig{});
    const auto first = c.update(100, -0.05, 0, 1.0);
    CHECK(first.value == 4.0);
    CHECK(c.state().initialized);
    CHECK(c.state().prev_y == 100.0);

    // falling exactly on the reference slope with no error keeps delta0
    const auto second = c.update(99.95, -0.05, 0, 1.0);
    CHECK(second.value == doctest::Approx(4.0));
    CHECK_THROWS((void)c.update(99.9, -0.05, 0, 0.0));
}

TEST_CASE("TDC output stays in bounds") {
    TdcController c(TdcConfig{});
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> y(60, 110), e(-5, 5);
    for (int i = 0; i < 500; ++i) {
        const auto out = c.update(y(rng), -0.05, e(rng), 1.0);
        CHECK(out.value >= 0.0);
        CHECK(out.value <= 25.0);
    }
}

TEST_CASE("delta_increment") {
    SwitchConfig cfg;
    CHECK(delta_increment(cfg, 100, 98) == doctest::Approx(5.0));
    CHECK(delta_increment(cfg, 100, 100) == 4.0);
    CHECK(delta_increment(cfg, 100, 103) == 4.0);
    cfg.xi = 2;
    CHECK(delta_increment(cfg, 100, 97) == doctest::Approx(4 + 0.5 * 9));
}

TEST_CASE("switching starts on the ramp") {
    SwitchConfig cfg;
    cfg.k2_gain = 0.2;
    cfg.k3_gain = 0.4;
    SwitchingController c(cfg, 100);
    const auto out = c.update(100, 30, 1.0, 0);
    CHECK(out.delta_pi == doctest::Approx(6.0));
    CHECK(out.delta_inc == 4.0);
    CHECK_FALSE(out.pi_selected);
    CHECK(out.delta == 4.0);

    // zero error at the start selects the PI branch and commands zero
    SwitchingController z(cfg, 100);
    const auto zo = z.update(100, 0, 1.0, 0);
    CHECK(zo.pi_selected);
    CHECK(zo.delta == 0.0);
}

TEST_CASE("switching always returns the smaller branch") {
    SwitchingController c(SwitchConfig{}, 100);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> y(60, 100);
    for (int day = 0; day < 400; ++day) {
        const double yy = y(rng);
        const auto out = c.update(yy, yy - 70, 1.0, day);
        const double want = std::clamp(std::min(out.delta_inc, out.delta_pi), 0.0, 25.0);
        CHECK(out.delta == doctest::Approx(want));
        CHECK(out.pi_selected == (out.delta_inc > out.delta_pi));
    }
}

TEST_CASE("switch day and conditional integration") {
    SwitchConfig cfg;
    SwitchingController c(cfg, 100);
    // ramp branch while the error term dominates; integral frozen
    c.update(100, 30, 1.0, 0);
    CHECK(c.state().integral == 0.0);
    CHECK_FALSE(c.state().switch_day);
    const auto o = c.update(80, 2, 1.0, 7);
    CHECK(o.pi_selected);
    CHECK(c.state().switch_day == 7);
    CHECK(c.state().integral == doctest::Approx(2.0));
    c.update(79, 1, 1.0, 8);
    CHECK(c.state().switch_day == 7);

    cfg.conditional_integration = false;
    SwitchingController u(cfg, 100);
    u.update(100, 30, 1.0, 0);
    CHECK(u.state().integral == doctest::Approx(30.0));
}

TEST_CASE("error sign convention drives activity up when above target") {
    SwitchingController c(SwitchConfig{}, 100);
    c.update(100, 30, 1.0, 0);
    const auto above = c.update(75, 5, 1.0, 1);  // y above y_d
    SwitchingController d(SwitchConfig{}, 100);
    d.update(100, 30, 1.0, 0);
    const auto below = d.update(75, -5, 1.0, 1); // y below y_d
    CHECK(above.delta > below.delta);
    CHECK(below.delta == 0.0);
}
