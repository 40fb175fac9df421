#include "bodymass/observer.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace bodymass {

void ObserverConfig::validate() const {
    if (!(k_q > 0.0)) throw std::invalid_argument("observer: k_q must be > 0");
    if (t_period < 1) throw std::invalid_argument("observer: measurement period must be >= 1 day");
    if (!g1.allFinite() || !g2.allFinite()) throw std::invalid_argument("observer: gains not finite");
}

LinearizedSystem build_a_matrix(const ModelParams& p, const Row3& c_row) {
    LinearizedSystem sys;
    const double k = p.k_const;
    sys.a_mat << (-(1.0 - p.a) * p.gamma_f + p.b * k) / p.rho_f, -(1.0 - p.a) * p.gamma_l / p.rho_f,
        0.0, (-p.a * p.gamma_f - p.b * k) / p.rho_l, -p.a * p.gamma_l / p.rho_l, 0.0, 0.0, 0.0,
        -(p.rho_w / p.na) * p.zeta_na;
    sys.c_row = c_row;
    sys.observability_rank = observability_rank(sys.a_mat, c_row);
    if (sys.observability_rank < 3) {
        sys.warning = "(A, C) observability rank " + std::to_string(sys.observability_rank) + " < 3";
    }
    return sys;
}

int observability_rank(const Mat3& a, const Row3& c) {
    Mat3 obs;
    obs.row(0) = c;
    obs.row(1) = c * a;
    obs.row(2) = c * a * a;
    Eigen::FullPivHouseholderQR<Mat3> qr(obs);
    return static_cast<int>(qr.rank());
}

Mat3 solve_lyapunov(const Mat3& m, const Mat3& q_mat) {
    // Unknowns: P00 P01 P02 P11 P12 P22. Equation (i, j), i <= j:
    //   sum_k M(k,i) P(k,j) + P(i,k) M(k,j) = -Q(i,j)
    constexpr int idx[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
    Eigen::Matrix<double, 6, 6> lhs = Eigen::Matrix<double, 6, 6>::Zero();
    Eigen::Matrix<double, 6, 1> rhs;
    int row = 0;
    for (int i = 0; i < 3; ++i) {
        for (int j = i; j < 3; ++j, ++row) {
            for (int k = 0; k < 3; ++k) {
                lhs(row, idx[k][j]) += m(k, i);
                lhs(row, idx[i][k]) += m(k, j);
            }
            rhs(row) = -0.5 * (q_mat(i, j) + q_mat(j, i));
        }
    }
    Eigen::FullPivLU<Eigen::Matrix<double, 6, 6>> lu(lhs);
    if (!lu.isInvertible()) throw std::runtime_error("lyapunov: singular linear system");
    const Eigen::Matrix<double, 6, 1> sol = lu.solve(rhs);
    Mat3 p;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) p(i, j) = sol(idx[i][j]);
    return p;
}

LyapunovGain design_lyapunov_gain(const LinearizedSystem& sys, const Vec3& g1, const Mat3& q_mat) {
    const Mat3 m = sys.a_mat - g1 * sys.c_row;
    Eigen::EigenSolver<Mat3> es(m, false);
    for (int i = 0; i < 3; ++i) {
        if (!(es.eigenvalues()(i).real() < 0.0)) {
            throw std::domain_error("lyapunov: A - G1 C is not Hurwitz");
        }
    }
    LyapunovGain out;
    out.p0 = solve_lyapunov(m, q_mat);
    out.residual = (m.transpose() * out.p0 + out.p0 * m + q_mat).norm();
    Eigen::LLT<Mat3> llt(out.p0);
    if (llt.info() != Eigen::Success) throw std::runtime_error("lyapunov: P0 is not positive definite");
    out.g = 0.5 * llt.solve(sys.c_row.transpose());
    return out;
}

double soft_switch_weight(double t, double t_period, double k_q) {
    if (t < 0.0) throw std::domain_error("soft_switch_weight: t must be >= 0");
    const double j = std::floor(t / t_period);
    if (j < 1.0) return 0.0;
    return std::exp(-(t - j * t_period) / k_q);
}

bool record_full_measurement(ObserverState& os, const ObserverConfig& cfg,
                             const BodyComposition& x_true, int day) {
    if (day <= 0 || day % cfg.t_period != 0) return false;
    os.last_full_meas_day = day;
    os.last_full_meas = x_true;
    return true;
}

double periodic_weight(const ObserverState& os, const ObserverConfig& cfg, double tau) {
    if (!os.last_full_meas_day) return 0.0;
    return std::exp(-(tau - static_cast<double>(*os.last_full_meas_day)) / cfg.k_q);
}

Vec3 observer_rate(const ObserverState& os, const ObserverConfig& cfg, const ControlInput& u,
                   const MacroIntake& m, const ModelParams& p, const BodyComposition& xhat,
                   double y1, const BodyComposition& y2, double tau) {
    Vec3 rate = to_vec(plant_rhs(xhat, u, m, p, Fidelity::Simplified));
    const Vec3 v = to_vec(xhat);
    const double q = periodic_weight(os, cfg, tau);
    rate += (1.0 - q) * cfg.g1 * (y1 - v.sum());
    if (q > 0.0) {
        const Vec3 w = to_vec(y2);
        if (cfg.full_state_measurement) {
            rate += q * cfg.g2.cwiseProduct(w - v);
        } else {
            rate += q * cfg.g2 * (w(0) - v(0));
        }
    }
    return rate;
}

Vec3 periodic_track_rate(const ObserverState& os, const ObserverConfig& cfg, const ControlInput& u,
                         const MacroIntake& m, const ModelParams& p, const BodyComposition& y2) {
    if (cfg.hold == PeriodicHold::ZeroOrder || !os.last_full_meas_day) return Vec3::Zero();
    return to_vec(plant_rhs(y2, u, m, p, Fidelity::Simplified));
}

ObserverState observer_step(const ObserverState& os, const ObserverConfig& cfg,
                            const ControlInput& u, const ModelParams& p, double y1_meas, double t,
                            double dt, Integrator method, ObserverStepInfo* info) {
    const MacroIntake m = macro_split(u.ei_kcal, p);
    using V6 = Eigen::Matrix<double, 6, 1>;
    auto rhs = [&](double tau, const V6& z) {
        const BodyComposition xh{z(0), z(1), z(2)};
        const BodyComposition y2{z(3), z(4), z(5)};
        V6 out;
        out << observer_rate(os, cfg, u, m, p, xh, y1_meas, y2, tau),
            periodic_track_rate(os, cfg, u, m, p, y2);
        return out;
    };
    if (info) info->q_start = periodic_weight(os, cfg, t);

    V6 z0;
    z0 << to_vec(os.xhat), to_vec(os.last_full_meas);
    const V6 z1 = integrate_vector<6>(rhs, z0, t, dt, method);
    ObserverState next = os;
    next.xhat = {z1(0), z1(1), z1(2)};
    next.last_full_meas = {z1(3), z1(4), z1(5)};
    if (!next.xhat.valid()) throw std::runtime_error("observer: estimate left the valid state set");
    return next;
}

std::string_view to_string(PeriodicHold h) noexcept {
    return h == PeriodicHold::Model ? "model" : "zoh";
}

PeriodicHold parse_periodic_hold(std::string_view s) {
    if (s == "model") return PeriodicHold::Model;
    if (s == "zoh") return PeriodicHold::ZeroOrder;
    throw std::invalid_argument("unknown periodic hold '" + std::string(s) + "' (model|zoh)");
}

} // namespace bodymass
