#include "bodymass/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace bodymass {

std::string_view to_string(ControllerKind k) noexcept {
    switch (k) {
    case ControllerKind::Open: return "open";
    case ControllerKind::TDC: return "tdc";
    case ControllerKind::Switching: return "switching";
    case ControllerKind::AllocFL: return "alloc-fl";
    case ControllerKind::AllocSMC: return "alloc-smc";
    }
    return "?";
}

ControllerKind parse_controller(std::string_view s) {
    for (auto k : {ControllerKind::Open, ControllerKind::TDC, ControllerKind::Switching,
                   ControllerKind::AllocFL, ControllerKind::AllocSMC}) {
        if (s == to_string(k)) return k;
    }
    throw std::invalid_argument("unknown controller '" + std::string(s) +
                                "' (open|tdc|switching|alloc-fl|alloc-smc)");
}

void ScenarioConfig::validate() const {
    if (std::all_of(output_selector.begin(), output_selector.end(),
                    [](double v) { return v == 0.0; })) {
        throw std::invalid_argument("output selector must be nonzero");
    }
    if (!(dt_days > 0.0)) throw std::invalid_argument("dt_days must be > 0");
    if (days < 1) throw std::invalid_argument("days must be >= 1");
    if (!initial_state.valid()) throw std::invalid_argument("initial state must be positive");
    if (observer_enabled && !initial_estimate.valid()) {
        throw std::invalid_argument("initial estimate must be positive");
    }
    if (!(nominal_ei >= 0.0) || !(open_delta >= 0.0)) {
        throw std::invalid_argument("nominal inputs must be >= 0");
    }
    reference.validate();
    disturbance.validate();
    observer.validate();
    alloc.validate();
    params.validate();
}

namespace {

double dot(const std::array<double, 3>& c, const BodyComposition& x) {
    return c[0] * x.f_kg + c[1] * x.l_kg + c[2] * x.ecf_kg;
}

} // namespace

SimLog run_scenario(const ScenarioConfig& cfg_in) {
    ScenarioConfig cfg = cfg_in;
    if (cfg.auto_calibrate) calibrate(cfg.params, cfg.baseline);
    cfg.validate();

    const ModelParams& p = cfg.params;
    const Eigen::RowVector3d c_row{cfg.output_selector[0], cfg.output_selector[1],
                                   cfg.output_selector[2]};
    const bool use_estimate = cfg.observer_enabled && !cfg.output_is_body_mass();

    SimLog log;
    log.name = cfg.name;
    log.seed = cfg.disturbance.seed;
    log.params = p;
    log.records.reserve(static_cast<std::size_t>(cfg.days));

    DisturbanceStreams streams(cfg.disturbance.seed);
    BodyComposition x = cfg.initial_state;
    ObserverState os;
    os.xhat = cfg.observer_enabled ? cfg.initial_estimate : cfg.initial_state;

    std::unique_ptr<TdcController> tdc;
    std::unique_ptr<SwitchingController> sw;
    SlidingState sliding;
    const double y_start = dot(cfg.output_selector, use_estimate ? os.xhat : x);
    if (cfg.controller == ControllerKind::TDC) tdc = std::make_unique<TdcController>(cfg.tdc);
    if (cfg.controller == ControllerKind::Switching) {
        sw = std::make_unique<SwitchingController>(cfg.switching, y_start);
    }
    AllocConfig alloc_cfg = cfg.alloc;
    alloc_cfg.mode = cfg.controller == ControllerKind::AllocSMC ? AllocMode::SMC : AllocMode::FL;

    const double dt = cfg.dt_days;
    for (int k = 0; k < cfg.days; ++k) {
        try {
            SimRecord rec;
            rec.day = k;
            rec.t = k * dt;
            rec.x = x;
            rec.xhat = os.xhat;

            const DisturbanceDraw draw = streams.next_day();
            const double bm_meas = x.bm() + cfg.disturbance.bm_noise_kg * draw.bm;
            const double y_meas = cfg.output_is_body_mass() ? bm_meas : dot(cfg.output_selector, x);

            if (cfg.observer_enabled) {
                rec.full_measurement = record_full_measurement(os, cfg.observer, x, k);
            }
            const BodyComposition& x_ctrl = use_estimate ? os.xhat : x;
            rec.y = use_estimate ? dot(cfg.output_selector, os.xhat) : y_meas;

            const auto ref = eval_reference(cfg.reference, rec.t);
            rec.y_d = ref.y_d;
            rec.y_d_dot = ref.y_d_dot;
            rec.e_y = rec.y - rec.y_d;

            ControlInput u_cmd{cfg.nominal_ei, cfg.open_delta};
            switch (cfg.controller) {
            case ControllerKind::Open: break;
            case ControllerKind::TDC: {
                const auto out = tdc->update(rec.y, ref.y_d_dot, rec.e_y, dt);
                u_cmd.delta = out.value;
                rec.clamped = out.clamped;
                break;
            }
            case ControllerKind::Switching: {
                const auto out = sw->update(rec.y, rec.e_y, dt, k);
                u_cmd.delta = out.delta;
                rec.clamped = out.clamped;
                rec.pi_selected = out.pi_selected;
                break;
            }
            case ControllerKind::AllocFL:
            case ControllerKind::AllocSMC: {
                const auto out = allocate(x_ctrl, rec.e_y, ref.y_d_dot, rec.t, dt, sliding,
                                          alloc_cfg, c_row, p);
                u_cmd = out.u;
                rec.qp_status = out.qp.status;
                rec.sliding_s = out.constraint.s_value;
                rec.qp_objective = out.qp.objective;
                rec.ei_lower = out.bounds.lower;
                rec.ei_upper = out.bounds.upper;
                rec.ei_at_lower = out.qp.lower_active[0];
                (out.qp.status == QpStatus::Optimal ? log.qp_optimal : log.qp_relaxed)++;
                break;
            }
            }
            if (rec.clamped) ++log.clamp_events;
            rec.u_cmd = u_cmd;
            rec.u_applied = apply_disturbances(u_cmd, cfg.disturbance, draw);
            rec.r_scale = 1.0 + cfg.disturbance.r_coeff * draw.r;

            const MacroIntake m = macro_split(rec.u_applied.ei_kcal, p);
            double worst = 0.0;
            auto rhs = [&](double, const BodyComposition& s) {
                const Derivatives d = plant_rhs(s, rec.u_applied, m, p, cfg.plant_fidelity, rec.r_scale);
                const double eb = energy_balance(s, d, rec.u_applied, p, cfg.plant_fidelity);
                const double res = std::abs(p.rho_f * d.df_dt + p.rho_l * d.dl_dt - eb);
                worst = std::max(worst, res / std::max(1.0, std::abs(eb)));
                return d;
            };
            const Derivatives d0 = rhs(rec.t, x);
            rec.eb = energy_balance(x, d0, rec.u_applied, p, cfg.plant_fidelity);
            rec.ee = rec.u_applied.ei_kcal - rec.eb;

            BodyComposition x_next;
            if (cfg.observer_enabled) {
                // Plant and estimate advance together; the daily output seen by
                // the observer is the continuous body mass plus the day's noise.
                const MacroIntake m_cmd = macro_split(u_cmd.ei_kcal, p);
                const double noise = bm_meas - x.bm();
                using V9 = Eigen::Matrix<double, 9, 1>;
                auto aug = [&](double tau, const V9& z) {
                    const BodyComposition xs{z(0), z(1), z(2)};
                    const BodyComposition xh{z(3), z(4), z(5)};
                    const BodyComposition y2{z(6), z(7), z(8)};
                    V9 out;
                    out << to_vec(rhs(tau, xs)),
                        observer_rate(os, cfg.observer, u_cmd, m_cmd, p, xh, xs.bm() + noise, y2, tau),
                        periodic_track_rate(os, cfg.observer, u_cmd, m_cmd, p, y2);
                    return out;
                };
                V9 z0;
                z0 << to_vec(x), to_vec(os.xhat), to_vec(os.last_full_meas);
                const V9 z1 = integrate_vector<9>(aug, z0, rec.t, dt, cfg.integrator);
                x_next = {z1(0), z1(1), z1(2)};
                os.xhat = {z1(3), z1(4), z1(5)};
                os.last_full_meas = {z1(6), z1(7), z1(8)};
                rec.q = periodic_weight(os, cfg.observer, rec.t);
                if (!os.xhat.valid()) throw std::runtime_error("observer estimate left the positive orthant");
            } else {
                x_next = integrate_step(rhs, x, rec.t, dt, cfg.integrator);
                os.xhat = x_next;
            }
            rec.partition_residual = worst;

            if (!x_next.valid()) throw std::runtime_error("plant state left the positive orthant");
            x = x_next;
            log.records.push_back(rec);
        } catch (const SimulationError&) {
            throw;
        } catch (const std::exception& e) {
            throw SimulationError(k, e.what());
        }
    }
    log.final_state = x;
    log.final_estimate = os.xhat;
    if (sw) log.switch_day = sw->state().switch_day;
    return log;
}

} // namespace bodymass
