#include "petcor/engine.hpp"

#include <cmath>

#include "petcor/diagnostics.hpp"
#include "petcor/errors.hpp"

namespace petcor {

namespace {

constexpr double kGridRelTol = 1e-12;

long ticks_of(double period, double h, const std::string& what) {
    const long ticks = std::llround(period / h);
    if (ticks < 2) {
        throw ContractViolation(what + ": master step must be at most half the period " +
                                std::to_string(period));
    }
    if (std::abs(period - static_cast<double>(ticks) * h) > kGridRelTol * std::max(period, h)) {
        throw ContractViolation(what + ": master step does not divide the period " +
                                std::to_string(period));
    }
    return ticks;
}

}  // namespace

void Scenario::validate() {
    warnings.clear();
    for (const std::string& w : exo.warnings) warnings.push_back(w);

    graph.validate();
    if (!has_spanning_tree(graph)) {
        throw ContractViolation("scenario: graph has no directed spanning tree from the leader");
    }

    const int n = graph.followers;
    if (static_cast<int>(plants.size()) != n) {
        throw ContractViolation("scenario: one plant per follower required");
    }
    if (static_cast<int>(controllers.size()) != n) {
        throw ContractViolation("scenario: one controller per follower required");
    }
    observer.validate();
    if (filters) {
        if (static_cast<int>(filters->size()) != n) {
            throw ContractViolation("scenario: one filter per follower required when the sensor PETM is on");
        }
        for (const FilterParams& fp : *filters) fp.validate();
    }

    if (!(h > 0.0)) {
        throw ContractViolation("scenario: master step must be positive");
    }
    if (t_end < 0.0) {
        throw ContractViolation("scenario: t_end must be non-negative");
    }
    const long steps = std::llround(t_end / h);
    if (std::abs(t_end - static_cast<double>(steps) * h) > kGridRelTol * std::max(t_end, h)) {
        throw ContractViolation("scenario: t_end must be a multiple of the master step");
    }

    for (const auto& [pair, period] : graph.pair_periods) {
        ticks_of(period, h, "pair (" + std::to_string(pair.first) + "," + std::to_string(pair.second) + ")");
    }

    for (int i = 0; i < n; ++i) {
        plants[i].validate(&warnings);
        validate_controller(controllers[i], plants[i].order);
        if (plants[i].delay < h || controllers[i].d_hat < h) {
            throw ContractViolation("scenario: delays must be at least one master step (agent " +
                                    std::to_string(i + 1) + ")");
        }
        if (filters) {
            ticks_of((*filters)[i].cal_t, h, "sensor period of agent " + std::to_string(i + 1));
            if (plants[i].order != 1) {
                throw ContractViolation("scenario: the sensor PETM supports first-order plants only");
            }
        }
    }

    for (double lv : diagnostics.lambda) {
        if (lv <= 0.0) throw ContractViolation("scenario: energy weights must be positive");
    }
    for (double lv : diagnostics.lambda_cal) {
        if (lv <= 0.0) throw ContractViolation("scenario: energy weights must be positive");
    }

    const SamplingBound bound = max_sampling_bound(graph, exo.dim());
    const double kappa_t = observer.kappa() * graph.max_period();
    if (kappa_t > bound.m) {
        warnings.push_back("observer: kappa * max period = " + std::to_string(kappa_t) +
                           " exceeds the sampling bound M = " + std::to_string(bound.m) +
                           "; convergence is no longer certified");
    }
}

Engine::Engine(Scenario scenario) : scenario_(std::move(scenario)) {
    const Scenario& sc = scenario_;
    const int n = sc.followers();
    const int nv = sc.exo.dim();
    n_steps_ = std::llround(sc.t_end / sc.h);

    for (const auto& [pair, period] : sc.graph.pair_periods) {
        pair_ticks_[pair] = ticks_of(period, sc.h, "pair period");
    }
    if (sc.filters) {
        for (int i = 0; i < n; ++i) {
            filter_ticks_.push_back(ticks_of((*sc.filters)[i].cal_t, sc.h, "sensor period"));
        }
    }

    const auto [v0, y00] = leader_state(sc.exo, 0.0);

    agents_.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double window =
            std::max(sc.plants[i].delay, sc.controllers[i].d_hat) + 2.0 * sc.h;
        AgentRuntime rt{
            .x = sc.plants[i].x0,
            .obs = sc.exact_observer_init ? ObserverState{sc.exo.s, v0}
                                          : ObserverState{Matrix::Zero(nv, nv), Vector::Zero(nv)},
            .hist = InputHistory(window, sc.h),
            .filter = {},
            .last_chi = {},
            .last_x_hat = Vector::Zero(sc.plants[i].order),
            .last_u = 0.0,
            .neighbors = {},
            .dxt_hist = {},
            .dxh_hist = {},
        };
        for (int j = 0; j <= n; ++j) {
            if (sc.graph.adjacency(i + 1, j) > 0.0) {
                rt.neighbors.emplace_back(j, sc.graph.adjacency(i + 1, j));
            }
        }
        agents_.push_back(std::move(rt));
    }

    // Synthetic broadcast records at t = 0 for every communicating pair and
    // every self pair; leader records carry the true matrix and state.
    for (const auto& [pair, period] : sc.graph.pair_periods) {
        const auto [i, j] = pair;
        BroadcastRecord rec;
        rec.t_event = 0.0;
        if (j == 0) {
            rec.s_snapshot = sc.exo.s;
            rec.v_snapshot = v0;
        } else {
            rec.s_snapshot = agents_[j - 1].obs.s_hat;
            rec.v_snapshot = agents_[j - 1].obs.v_hat;
        }
        records_.emplace(pair, std::move(rec));
    }

    // The filter starts measurement-consistent, with both holds forced at t=0.
    if (sc.filters) {
        for (int i = 0; i < n; ++i) {
            const double phi0 =
                measure_phi(agents_[i].x(0), records_.at({i + 1, i + 1}), sc.exo.f, 0.0);
            agents_[i].filter = FilterState{
                .x_hat = phi0,
                .last_sample_t = 0.0,
                .x_hat_at_sample = phi0,
                .last_event_phi = phi0,
                .last_event_t = 0.0,
            };
        }
    }

    trace_.n_agents = n;
    trace_.exo_dim = nv;
    for (int i = 0; i < n; ++i) trace_.orders.push_back(sc.plants[i].order);
    trace_.x.resize(n);
    trace_.x_hat.resize(n);
    trace_.u.resize(n);
    trace_.e.resize(n);
    trace_.phi.resize(n);
    trace_.v_hat.resize(n);
    trace_.s_hat.resize(n);
    trace_.sensor_samples.assign(n, 0);
    trace_.sensor_transmissions.assign(n, 0);
    for (const auto& [pair, period] : sc.graph.pair_periods) trace_.pair_stats[pair];
    trace_.has_diagnostics = sc.diagnostics.enabled;
    if (sc.diagnostics.enabled) trace_.diag.resize(n);

    const std::size_t rows = static_cast<std::size_t>(n_steps_) + 1;
    trace_.t.reserve(rows);
    trace_.y0.reserve(rows);
    trace_.v_leader.reserve(rows * nv);
    for (int i = 0; i < n; ++i) {
        trace_.x[i].reserve(rows * sc.plants[i].order);
        trace_.x_hat[i].reserve(rows * sc.plants[i].order);
        trace_.u[i].reserve(rows);
        trace_.e[i].reserve(rows);
        trace_.phi[i].reserve(rows);
        trace_.v_hat[i].reserve(rows * nv);
        trace_.s_hat[i].reserve(rows * nv * nv);
    }
}

void Engine::process_pair_triggers(double t) {
    const Scenario& sc = scenario_;
    for (const auto& [pair, ticks] : pair_ticks_) {
        if (tick_ % ticks != 0) continue;
        const auto [i, j] = pair;
        BroadcastRecord& rec = records_.at(pair);

        ObserverState sender;
        if (j == 0) {
            const auto [v, y] = leader_state(sc.exo, t);
            sender = {sc.exo.s, v};
        } else {
            sender = agents_[j - 1].obs;
        }

        const TriggerDecision dec =
            trigger_check_pair(sender, rec, sc.observer, t, sc.graph.pair_periods.at(pair));
        PairStats& stats = trace_.pair_stats.at(pair);
        stats.samples += 1;
        if (!dec.fired()) continue;

        rec.t_event = t;
        rec.s_snapshot = sender.s_hat;
        rec.v_snapshot = sender.v_hat;
        stats.transmissions += 1;
        if (dec.fire_s) {
            trace_.net_events.push_back({t, j, i, 'S', dec.dev_s, dec.thr_s});
        }
        if (dec.fire_v) {
            trace_.net_events.push_back({t, j, i, 'v', dec.dev_v, dec.thr_v});
        }
    }
}

void Engine::process_sensor_sampling(double t) {
    if (!scenario_.filters) return;
    const int n = scenario_.followers();
    for (int i = 0; i < n; ++i) {
        if (tick_ % filter_ticks_[i] != 0) continue;
        AgentRuntime& rt = agents_[i];
        FilterState& fs = rt.filter;
        fs.x_hat_at_sample = fs.x_hat;
        fs.last_sample_t = t;

        const double phi_now = measure_phi(rt.x(0), records_.at({i + 1, i + 1}), scenario_.exo.f, t);
        trace_.sensor_samples[i] += 1;
        const SensorTrigger st = trigger_check_sensor(phi_now, fs, (*scenario_.filters)[i], t);
        if (st.fire) {
            fs.last_event_phi = phi_now;
            fs.last_event_t = t;
            trace_.sensor_transmissions[i] += 1;
            trace_.sensor_events.push_back({t, i + 1, phi_now, st.deviation, st.threshold});
        }
    }
}

Vector Engine::direct_state_estimate(int agent, double /*t*/) const {
    const AgentRuntime& rt = agents_[agent];
    const FollowerPlant& plant = scenario_.plants[agent];
    return rt.x - exosystem_shifts(plant.order, rt.obs.v_hat, rt.obs.s_hat, scenario_.exo.f);
}

void Engine::evaluate_controllers(double t) {
    const Scenario& sc = scenario_;
    const int n = sc.followers();
    for (int i = 0; i < n; ++i) {
        AgentRuntime& rt = agents_[i];
        Vector x_hat;
        if (sc.filters) {
            x_hat = Vector::Constant(1, rt.filter.x_hat);
        } else {
            x_hat = direct_state_estimate(i, t);
        }
        rt.last_x_hat = x_hat;
        rt.last_chi = predict(x_hat, rt.obs.v_hat, rt.obs.s_hat, rt.hist, sc.plants[i],
                              sc.controllers[i], sc.exo.f, t);
        rt.last_u = control(rt.last_chi, rt.obs.v_hat, rt.obs.s_hat, sc.plants[i],
                            sc.controllers[i], sc.exo.f);
        rt.hist.append(t, rt.last_u);
    }
}

void Engine::record_row(double t) {
    const Scenario& sc = scenario_;
    const int n = sc.followers();
    const auto [v_true, y0] = leader_state(sc.exo, t);

    trace_.t.push_back(t);
    trace_.y0.push_back(y0);
    for (int c = 0; c < v_true.size(); ++c) trace_.v_leader.push_back(v_true(c));

    for (int i = 0; i < n; ++i) {
        AgentRuntime& rt = agents_[i];
        for (int c = 0; c < rt.x.size(); ++c) trace_.x[i].push_back(rt.x(c));
        for (int c = 0; c < rt.last_x_hat.size(); ++c) trace_.x_hat[i].push_back(rt.last_x_hat(c));
        trace_.u[i].push_back(rt.last_u);
        trace_.e[i].push_back(rt.x(0) - y0);
        trace_.phi[i].push_back(measure_phi(rt.x(0), records_.at({i + 1, i + 1}), sc.exo.f, t));
        for (int c = 0; c < rt.obs.v_hat.size(); ++c) trace_.v_hat[i].push_back(rt.obs.v_hat(c));
        for (int r = 0; r < rt.obs.s_hat.rows(); ++r) {
            for (int c = 0; c < rt.obs.s_hat.cols(); ++c) {
                trace_.s_hat[i].push_back(rt.obs.s_hat(r, c));
            }
        }
        if (!rt.x.allFinite() || !rt.obs.v_hat.allFinite() || !rt.obs.s_hat.allFinite()) {
            throw SimulationFault("state diverged", t, i + 1);
        }
    }

    if (sc.diagnostics.enabled) record_diagnostics(t, v_true);
}

void Engine::record_diagnostics(double t, const Vector& v_true) {
    const Scenario& sc = scenario_;
    const int n = sc.followers();
    for (int i = 0; i < n; ++i) {
        AgentRuntime& rt = agents_[i];
        const FollowerPlant& plant = sc.plants[i];
        const ControllerConfig& cfg = sc.controllers[i];
        AgentDiagSeries& out = trace_.diag[i];

        const BacksteppingSnapshot snap = backstepping_snapshot(
            plant, cfg, rt.hist, rt.last_x_hat, rt.obs.v_hat, rt.obs.s_hat, v_true, sc.exo.s,
            sc.exo.f, t, &rt.last_chi);
        out.w_boundary.push_back(snap.w_boundary());

        const double x_bar = rt.x(0) - sc.exo.f.dot(v_true);
        const LyapunovSample v =
            lyapunov_v(snap, x_bar, plant.delay, cfg.d_hat, sc.diagnostics.lambda);
        for (int k = 0; k < 4; ++k) out.v_parts.push_back(v.parts[k]);
        out.v_parts.push_back(v.total);

        if (sc.filters) {
            // Stored right-hand sides of the true error state and the filter.
            const double u_delayed = delayed_input(rt.hist, t, plant.delay);
            const double dx_bar = plant_rhs(plant, rt.x, u_delayed, t)(0) -
                                  sc.exo.f.dot(sc.exo.s * v_true);
            const double dx_hat = filter_rhs(rt.filter, rt.obs.v_hat, rt.obs.s_hat, rt.hist,
                                             plant, cfg, (*sc.filters)[i], t);
            rt.dxt_hist.emplace_back(t, dx_bar - dx_hat);
            rt.dxh_hist.emplace_back(t, dx_hat);
            const double cal_t = (*sc.filters)[i].cal_t;
            const std::size_t keep = static_cast<std::size_t>(filter_ticks_[i]) + 1;
            while (rt.dxt_hist.size() > keep) {
                rt.dxt_hist.pop_front();
                rt.dxh_hist.pop_front();
            }

            if (t >= cal_t) {
                const double x_tilde = x_bar - rt.filter.x_hat;
                const LyapunovSample cv =
                    lyapunov_cal_v(snap, x_tilde, rt.filter.x_hat, cfg.d_hat, rt.dxt_hist,
                                   rt.dxh_hist, cal_t, t, sc.diagnostics.lambda_cal);
                for (int k = 0; k < 5; ++k) out.calv_parts.push_back(cv.parts[k]);
                out.calv_parts.push_back(cv.total);
            } else {
                for (int k = 0; k < 6; ++k) out.calv_parts.push_back(0.0);
            }
        } else {
            for (int k = 0; k < 6; ++k) out.calv_parts.push_back(0.0);
        }
    }
}

void Engine::integrate(double t) {
    const Scenario& sc = scenario_;
    const int n = sc.followers();
    const double h = sc.h;

    struct Stage {
        std::vector<Vector> x;
        std::vector<Matrix> s_hat;
        std::vector<Vector> v_hat;
        std::vector<double> xf;
    };

    auto capture = [&]() {
        Stage st;
        st.x.reserve(n);
        st.s_hat.reserve(n);
        st.v_hat.reserve(n);
        st.xf.reserve(n);
        for (int i = 0; i < n; ++i) {
            st.x.push_back(agents_[i].x);
            st.s_hat.push_back(agents_[i].obs.s_hat);
            st.v_hat.push_back(agents_[i].obs.v_hat);
            st.xf.push_back(sc.filters ? agents_[i].filter.x_hat : 0.0);
        }
        return st;
    };

    auto rhs = [&](const Stage& st, double s) {
        Stage d;
        d.x.resize(n);
        d.s_hat.resize(n);
        d.v_hat.resize(n);
        d.xf.assign(n, 0.0);
        for (int i = 0; i < n; ++i) {
            const FollowerPlant& plant = sc.plants[i];
            d.x[i] = plant_rhs(plant, st.x[i], delayed_input(agents_[i].hist, s, plant.delay), s);

            std::vector<NeighborInput> inputs;
            inputs.reserve(agents_[i].neighbors.size());
            for (const auto& [j, w] : agents_[i].neighbors) {
                inputs.push_back({w, &records_.at({i + 1, j})});
            }
            const ObserverState obs_stage{st.s_hat[i], st.v_hat[i]};
            const ObserverDerivative od =
                observer_rhs(obs_stage, inputs, records_.at({i + 1, i + 1}), sc.observer, s);
            d.s_hat[i] = od.ds;
            d.v_hat[i] = od.dv;

            if (sc.filters) {
                FilterState fs = agents_[i].filter;  // holds frozen across the step
                fs.x_hat = st.xf[i];
                d.xf[i] = filter_rhs(fs, st.v_hat[i], st.s_hat[i], agents_[i].hist, plant,
                                     sc.controllers[i], (*sc.filters)[i], s);
            }
        }
        return d;
    };

    auto advanced = [&](const Stage& base, const Stage& d, double factor) {
        Stage st;
        st.x.resize(n);
        st.s_hat.resize(n);
        st.v_hat.resize(n);
        st.xf.resize(n);
        for (int i = 0; i < n; ++i) {
            st.x[i] = base.x[i] + factor * d.x[i];
            st.s_hat[i] = base.s_hat[i] + factor * d.s_hat[i];
            st.v_hat[i] = base.v_hat[i] + factor * d.v_hat[i];
            st.xf[i] = base.xf[i] + factor * d.xf[i];
        }
        return st;
    };

    const Stage base = capture();
    const Stage k1 = rhs(base, t);
    const Stage k2 = rhs(advanced(base, k1, 0.5 * h), t + 0.5 * h);
    const Stage k3 = rhs(advanced(base, k2, 0.5 * h), t + 0.5 * h);
    const Stage k4 = rhs(advanced(base, k3, h), t + h);

    const double w = h / 6.0;
    for (int i = 0; i < n; ++i) {
        agents_[i].x = base.x[i] + w * (k1.x[i] + 2.0 * k2.x[i] + 2.0 * k3.x[i] + k4.x[i]);
        agents_[i].obs.s_hat =
            base.s_hat[i] + w * (k1.s_hat[i] + 2.0 * k2.s_hat[i] + 2.0 * k3.s_hat[i] + k4.s_hat[i]);
        agents_[i].obs.v_hat =
            base.v_hat[i] + w * (k1.v_hat[i] + 2.0 * k2.v_hat[i] + 2.0 * k3.v_hat[i] + k4.v_hat[i]);
        if (sc.filters) {
            agents_[i].filter.x_hat =
                base.xf[i] + w * (k1.xf[i] + 2.0 * k2.xf[i] + 2.0 * k3.xf[i] + k4.xf[i]);
        }
    }
}

void Engine::step() {
    const double t = time();
    if (tick_ > 0) process_pair_triggers(t);
    if (tick_ > 0) process_sensor_sampling(t);
    evaluate_controllers(t);
    record_row(t);
    if (tick_ < n_steps_) integrate(t);
    ++tick_;
}

void Engine::run_to_end() {
    while (tick_ <= n_steps_) step();
}

SimTrace run(Scenario scenario) {
    Engine engine(std::move(scenario));
    engine.run_to_end();
    return engine.take_trace();
}

}  // namespace petcor
