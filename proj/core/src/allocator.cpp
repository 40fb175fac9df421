#include "bodymass/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bodymass {

void AllocConfig::validate() const {
    if (!(w_mat(0, 0) > 0.0) || !(w_mat(1, 1) > 0.0)) {
        throw std::invalid_argument("allocator: W diagonal entries must be > 0");
    }
    if (!(tau > 0.0)) throw std::invalid_argument("allocator: tau must be > 0");
    if (!(rho2 >= 0.0 && rho2 <= 1.0)) throw std::invalid_argument("allocator: rho2 must be in [0, 1]");
    if (!(rho1 >= 0.0)) throw std::invalid_argument("allocator: rho1 must be >= 0");
    if (!(delta_min <= delta_max)) throw std::invalid_argument("allocator: delta_min > delta_max");
    if (boundary_layer < 0.0) throw std::invalid_argument("allocator: boundary layer must be >= 0");
}

double qp_objective(const QpProblem& qp, const Vec2& u) {
    const Vec2 d = u - qp.u_bar;
    return 0.5 * d.dot(qp.w_mat * d);
}

namespace {

double scale_tol(double a, double b) { return 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); }

void finish(const QpProblem& qp, QpResult& r) {
    for (int i = 0; i < 2; ++i) {
        r.u(i) = std::clamp(r.u(i), qp.lb(i), qp.ub(i));
        const double tol = scale_tol(qp.lb(i), qp.ub(i));
        r.lower_active[i] = r.u(i) - qp.lb(i) <= tol;
        r.upper_active[i] = qp.ub(i) - r.u(i) <= tol;
    }
    r.objective = qp_objective(qp, r.u);
    r.equality_residual = std::abs(qp.a_row.dot(r.u) - qp.b_scalar);
}

} // namespace

QpResult solve_qp(const QpProblem& qp) {
    if ((qp.lb.array() > qp.ub.array()).any()) throw std::invalid_argument("solve_qp: empty box");
    const Vec2 a = qp.a_row.transpose();
    const double aa = a.squaredNorm();
    if (!(aa > 1e-24)) throw std::invalid_argument("solve_qp: zero constraint row");

    // Range of a.u over the box.
    double amin = 0.0, amax = 0.0;
    for (int i = 0; i < 2; ++i) {
        amin += std::min(a(i) * qp.lb(i), a(i) * qp.ub(i));
        amax += std::max(a(i) * qp.lb(i), a(i) * qp.ub(i));
    }
    const double b = qp.b_scalar;
    const double btol = scale_tol(amin, amax);

    QpResult r;
    if (b > amax + btol || b < amin - btol) {
        // Closest face of the box to the constraint line; free coordinates take
        // the preferred value.
        const bool want_max = b > amax;
        r.status = QpStatus::RelaxedEquality;
        for (int i = 0; i < 2; ++i) {
            if (a(i) == 0.0) {
                r.u(i) = std::clamp(qp.u_bar(i), qp.lb(i), qp.ub(i));
            } else {
                r.u(i) = ((a(i) > 0.0) == want_max) ? qp.ub(i) : qp.lb(i);
            }
        }
        finish(qp, r);
        return r;
    }

    // u(alpha) = u0 + alpha n, u0 the minimum-norm solution, n spans null(a).
    const Vec2 u0 = a * (b / aa);
    const Vec2 n{-a(1), a(0)};
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 2; ++i) {
        if (std::abs(n(i)) <= 1e-15 * n.norm()) continue; // coordinate fixed by the equality
        const double t1 = (qp.lb(i) - u0(i)) / n(i);
        const double t2 = (qp.ub(i) - u0(i)) / n(i);
        lo = std::max(lo, std::min(t1, t2));
        hi = std::min(hi, std::max(t1, t2));
    }
    const Vec2 wn = qp.w_mat * n;
    double alpha = -wn.dot(u0 - qp.u_bar) / n.dot(wn);
    if (lo > hi) {
        alpha = 0.5 * (lo + hi); // segment collapsed to a point up to rounding
    } else {
        alpha = std::clamp(alpha, lo, hi);
    }
    r.u = u0 + alpha * n;
    r.status = QpStatus::Optimal;
    finish(qp, r);
    return r;
}

double sign_or_zero(double v) noexcept { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

Mat32 build_g_matrix(const BodyComposition& x, const ModelParams& p) {
    const double r = p.a + p.b * x.f_kg;
    const double bm = x.bm();
    Mat32 g;
    g << (1.0 - p.beta) * (1.0 - r) / p.rho_f, -(1.0 - r) * bm / p.rho_f,
        (1.0 - p.beta) * r / p.rho_l, -r * bm / p.rho_l,
        (p.rho_w / p.na) * p.zeta_ci * p.z1 / (p.k1 * p.ci_b), 0.0;
    return g;
}

Eigen::Vector3d build_f_vector(const BodyComposition& x, const ModelParams& p) {
    const double r = p.a + p.b * x.f_kg;
    const double rmr = p.k_const + p.gamma_l * x.l_kg + p.gamma_f * x.f_kg;
    return {-(1.0 - r) * rmr / p.rho_f, -r * rmr / p.rho_l,
            (p.rho_w / p.na) * (p.zeta_na * (p.ecf_init - x.ecf_kg) - p.zeta_ci)};
}

Constraint build_constraint(const AllocConfig& cfg, const Eigen::RowVector3d& c_row,
                            const BodyComposition& x, double e_y, double y_d_dot,
                            const SlidingState& s, const ModelParams& p) {
    Constraint out;
    out.a_row = c_row * build_g_matrix(x, p);
    if (!(out.a_row.norm() >= 1e-12)) {
        throw std::domain_error("allocator: constraint row C g(x) vanishes");
    }
    const double cf = c_row * build_f_vector(x, p);
    out.s_value = e_y + cfg.lambda_sm * s.integral_ey;
    if (cfg.mode == AllocMode::FL) {
        out.b_scalar = y_d_dot - cfg.lambda_fl * e_y - cf;
    } else {
        const double sw = cfg.boundary_layer > 0.0
                              ? std::clamp(out.s_value / cfg.boundary_layer, -1.0, 1.0)
                              : sign_or_zero(out.s_value);
        out.b_scalar = y_d_dot - cfg.lambda_sm * e_y - cf - cfg.gamma_smc * sw;
    }
    return out;
}

EiBounds ei_bounds(double t, const AllocConfig& cfg) {
    if (t < 0.0) throw std::domain_error("ei_bounds: t must be >= 0");
    return {cfg.ei_bar - cfg.rho1 * (1.0 - cfg.rho2 * std::exp(-t / cfg.tau)), cfg.ei_bar};
}

AllocationResult allocate(const BodyComposition& x, double e_y, double y_d_dot, double t,
                          double dt, SlidingState& s, const AllocConfig& cfg,
                          const Eigen::RowVector3d& c_row, const ModelParams& p) {
    AllocationResult out;
    out.constraint = build_constraint(cfg, c_row, x, e_y, y_d_dot, s, p);
    out.bounds = ei_bounds(t, cfg);

    QpProblem qp;
    qp.w_mat = cfg.w_mat;
    qp.u_bar = cfg.u_bar;
    qp.a_row = out.constraint.a_row;
    qp.b_scalar = out.constraint.b_scalar;
    qp.lb = {out.bounds.lower, cfg.delta_min};
    qp.ub = {out.bounds.upper, cfg.delta_max};
    out.qp = solve_qp(qp);
    out.u = {out.qp.u(0), out.qp.u(1)};

    s.s_value = out.constraint.s_value;
    s.integral_ey += dt * e_y;
    return out;
}

std::string_view to_string(QpStatus s) noexcept {
    return s == QpStatus::Optimal ? "optimal" : "relaxed";
}

} // namespace bodymass
