#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "bodymass/energy_model.hpp"
#include "bodymass/integrator.hpp"

namespace bodymass {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Row3 = Eigen::RowVector3d;

[[nodiscard]] inline Vec3 to_vec(const BodyComposition& x) { return {x.f_kg, x.l_kg, x.ecf_kg}; }
[[nodiscard]] inline BodyComposition to_state(const Vec3& v) { return {v(0), v(1), v(2)}; }
[[nodiscard]] inline Vec3 to_vec(const Derivatives& d) { return {d.df_dt, d.dl_dt, d.decf_dt}; }

/// How the periodic measurement is carried between measurement days: forward
/// with the Simplified model from the measured state, or held constant.
enum class PeriodicHold { Model, ZeroOrder };

/// Soft-switching observer settings. The daily output is y1 = C1 x with
/// C1 = [1 1 1]; the periodic output is y2 = C2 x with C2 = [1 0 0] (fat), or
/// the full state when `full_state_measurement` is set (G2 then acts as a
/// diagonal gain). `hold` selects how y2 is carried between measurements.
struct ObserverConfig {
    Vec3 g1{1.9, 1.2, -0.3};
    Vec3 g2{0.8, 1.0, -0.2};
    double k_q = 5.0;
    int t_period = 90;
    bool full_state_measurement = false;
    PeriodicHold hold = PeriodicHold::Model;

    void validate() const;
};

struct ObserverState {
    BodyComposition xhat;
    std::optional<int> last_full_meas_day;
    // Last periodic measurement, carried forward per ObserverConfig::hold. Only
    // f_kg enters the innovation unless full-state measurement is on.
    BodyComposition last_full_meas;
};

/// Linear part of the Simplified model, x' = A x + B u + Phi, and the
/// observability rank of (A, c_row).
struct LinearizedSystem {
    Mat3 a_mat = Mat3::Zero();
    Row3 c_row = Row3::Ones();
    int observability_rank = 0;
    std::optional<std::string> warning;
};

[[nodiscard]] LinearizedSystem build_a_matrix(const ModelParams& p, const Row3& c_row = Row3::Ones());

/// rank of [C; C A; C A^2].
[[nodiscard]] int observability_rank(const Mat3& a, const Row3& c);

struct LyapunovGain {
    Mat3 p0 = Mat3::Zero();
    Vec3 g = Vec3::Zero();
    double residual = 0.0; // Frobenius norm of M^T P + P M + Q, M = A - g1 C
};

/// Solve (A - g1 C)^T P0 + P0 (A - g1 C) = -Q for symmetric P0 and return
/// G = P0^{-1} C^T / 2. Throws std::domain_error when A - g1 C is not Hurwitz
/// and std::runtime_error when the solve fails.
[[nodiscard]] LyapunovGain design_lyapunov_gain(const LinearizedSystem& sys, const Vec3& g1,
                                                const Mat3& q_mat);

/// Solve M^T P + P M = -Q over the six independent entries of symmetric P.
[[nodiscard]] Mat3 solve_lyapunov(const Mat3& m, const Mat3& q_mat);

/// q = exp(-(t - jT) / k_q) with j = floor(t / T); zero before the first
/// measurement at t = T.
[[nodiscard]] double soft_switch_weight(double t, double t_period, double k_q);

/// Store a periodic composition measurement if `day` is a measurement day.
/// Returns true when a measurement was taken.
bool record_full_measurement(ObserverState& os, const ObserverConfig& cfg,
                             const BodyComposition& x_true, int day);

/// Weight of the periodic innovation at time tau: exp(-(tau - jT) / k_q) after
/// the most recent stored measurement, zero before the first one.
[[nodiscard]] double periodic_weight(const ObserverState& os, const ObserverConfig& cfg, double tau);

/// Right-hand side of the observer at estimate `xhat` for daily output `y1` and
/// the current value `y2` of the carried periodic measurement.
[[nodiscard]] Vec3 observer_rate(const ObserverState& os, const ObserverConfig& cfg,
                                 const ControlInput& u, const MacroIntake& m,
                                 const ModelParams& p, const BodyComposition& xhat, double y1,
                                 const BodyComposition& y2, double tau);

/// Rate of the carried periodic measurement: the Simplified model under the
/// Model hold, zero under ZeroOrder or before the first measurement.
[[nodiscard]] Vec3 periodic_track_rate(const ObserverState& os, const ObserverConfig& cfg,
                                       const ControlInput& u, const MacroIntake& m,
                                       const ModelParams& p, const BodyComposition& y2);

[[nodiscard]] std::string_view to_string(PeriodicHold h) noexcept;
[[nodiscard]] PeriodicHold parse_periodic_hold(std::string_view s);

struct ObserverStepInfo {
    double q_start = 0.0; // weight at the start of the step
};

/// Integrate the estimate over [t, t + dt] with the Simplified model driven by
/// the known (nominal) input u, the daily innovation y1 - C1 xhat weighted by
/// (1 - q) and the periodic innovation y2 - C2 xhat weighted by q. y1 is held
/// constant over the step; the carried periodic measurement advances with the
/// estimate. The scenario loop integrates plant and observer jointly instead,
/// so that y1 follows the plant within the day.
[[nodiscard]] ObserverState observer_step(const ObserverState& os, const ObserverConfig& cfg,
                                          const ControlInput& u, const ModelParams& p,
                                          double y1_meas, double t, double dt,
                                          Integrator method, ObserverStepInfo* info = nullptr);

} // namespace bodymass
