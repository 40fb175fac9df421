#pragma once

#include <string_view>

#include <Eigen/Dense>

#include "bodymass/energy_model.hpp"

namespace bodymass {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Mat32 = Eigen::Matrix<double, 3, 2>;

enum class AllocMode { FL, SMC };

/// Weighted minimum-deviation allocation of u = [EI, delta].
struct AllocConfig {
    AllocMode mode = AllocMode::FL;
    double lambda_fl = 0.7;
    double lambda_sm = 0.1;
    double gamma_smc = 0.01;
    double boundary_layer = 0.0; // > 0 replaces sgn(S) by sat(S / phi)
    Mat2 w_mat = (Mat2() << 0.2, 0.0, 0.0, 1000.0).finished();
    Vec2 u_bar{3500.0, 0.0};
    double ei_bar = 3500.0;
    double rho1 = 500.0;
    double rho2 = 1.0;
    double tau = 5.0;
    double delta_min = 0.0;
    double delta_max = 25.0;

    void validate() const;
};

/// min 1/2 (u - u_bar)^T W (u - u_bar)  s.t.  a_row u = b,  lb <= u <= ub.
struct QpProblem {
    Mat2 w_mat = Mat2::Identity();
    Vec2 u_bar = Vec2::Zero();
    Eigen::RowVector2d a_row = Eigen::RowVector2d::Zero();
    double b_scalar = 0.0;
    Vec2 lb = Vec2::Zero();
    Vec2 ub = Vec2::Zero();
};

enum class QpStatus {
    Optimal,         // equality met inside the box
    RelaxedEquality, // the constraint line misses the box; |a u - b| minimized
};

struct QpResult {
    Vec2 u = Vec2::Zero();
    QpStatus status = QpStatus::Optimal;
    double objective = 0.0;
    double equality_residual = 0.0;
    bool lower_active[2] = {false, false};
    bool upper_active[2] = {false, false};
};

[[nodiscard]] double qp_objective(const QpProblem& qp, const Vec2& u);

/// Exact solve for the 2-D case: the feasible set is a segment of the
/// constraint line, so the problem reduces to clamping a 1-D quadratic.
/// Throws std::invalid_argument on an empty box or a zero constraint row.
[[nodiscard]] QpResult solve_qp(const QpProblem& qp);

struct SlidingState {
    double integral_ey = 0.0; // kg day
    double s_value = 0.0;
};

/// Input matrix of x' = f + g u for u = [EI, delta], Simplified model, rows
/// already divided by rho_F and rho_L.
[[nodiscard]] Mat32 build_g_matrix(const BodyComposition& x, const ModelParams& p);

/// Drift term of x' = f + g u, Simplified model.
[[nodiscard]] Eigen::Vector3d build_f_vector(const BodyComposition& x, const ModelParams& p);

struct Constraint {
    Eigen::RowVector2d a_row = Eigen::RowVector2d::Zero();
    double b_scalar = 0.0;
    double s_value = 0.0;
};

/// a = C g(x); b = y_d_dot - lambda e_y - C f(x) [- Gamma sgn(S) for SMC],
/// with S = e_y + lambda_sm * integral. Throws std::domain_error when
/// |a| < 1e-12.
[[nodiscard]] Constraint build_constraint(const AllocConfig& cfg, const Eigen::RowVector3d& c_row,
                                          const BodyComposition& x, double e_y, double y_d_dot,
                                          const SlidingState& s, const ModelParams& p);

struct EiBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// lower = EI_bar - rho1 (1 - rho2 exp(-t / tau)), upper = EI_bar.
[[nodiscard]] EiBounds ei_bounds(double t, const AllocConfig& cfg);

struct AllocationResult {
    ControlInput u;
    QpResult qp;
    Constraint constraint;
    EiBounds bounds;
};

/// One allocation step; advances the sliding integral by dt e_y.
[[nodiscard]] AllocationResult allocate(const BodyComposition& x, double e_y, double y_d_dot,
                                        double t, double dt, SlidingState& s,
                                        const AllocConfig& cfg, const Eigen::RowVector3d& c_row,
                                        const ModelParams& p);

[[nodiscard]] std::string_view to_string(QpStatus s) noexcept;
[[nodiscard]] double sign_or_zero(double v) noexcept;

} // namespace bodymass
