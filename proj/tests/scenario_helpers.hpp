#pragma once

// Small closed-loop scenarios shared by the engine and diagnostics tests.

#include "petcor/engine.hpp"

namespace petcor::testing {

inline Matrix rotation() {
    Matrix s(2, 2);
    s << 0.0, 1.0, -1.0, 0.0;
    return s;
}

inline ObserverParams default_observer() {
    ObserverParams p;
    p.kappa1 = 3.0;
    p.kappa2 = 3.0;
    p.delta_s = 0.5;
    p.delta_v = 0.5;
    p.gamma_s = 0.8;
    p.gamma_v = 0.8;
    return p;
}

/// One follower pinned to the leader.
inline Scenario single_follower(Nonlinearity f, double k_gain, double delay, double d_hat,
                                double t_end, Vector v0, double x0 = 1.0) {
    Scenario sc;
    sc.exo = Exosystem::make(rotation(), std::move(v0));
    sc.graph.followers = 1;
    sc.graph.adjacency = Matrix::Zero(2, 2);
    sc.graph.adjacency(1, 0) = 1.0;
    sc.graph.pair_periods[{1, 0}] = 0.01;
    sc.graph.pair_periods[{1, 1}] = 0.01;

    FollowerPlant p;
    p.order = 1;
    p.f = f;
    p.delay = delay;
    p.ell = f.lipschitz();
    p.x0 = Vector::Constant(1, x0);
    sc.plants.push_back(p);

    ControllerConfig cfg;
    cfg.k = RowVector::Constant(1, k_gain);
    cfg.d_hat = d_hat;
    cfg.nx = 40;
    cfg.ell = p.ell;
    sc.controllers.push_back(cfg);

    sc.observer = default_observer();
    sc.t_end = t_end;
    sc.h = 1e-3;
    return sc;
}

/// Leader -> 1 -> 2 chain with the scenario nonlinearity on both followers.
inline Scenario two_follower_chain(double t_end) {
    Scenario sc;
    Vector v0(2);
    v0 << 1.0, 0.0;
    sc.exo = Exosystem::make(rotation(), v0);
    sc.graph.followers = 2;
    sc.graph.adjacency = Matrix::Zero(3, 3);
    sc.graph.adjacency(1, 0) = 1.0;
    sc.graph.adjacency(2, 1) = 1.0;
    sc.graph.pair_periods[{1, 0}] = 0.01;
    sc.graph.pair_periods[{2, 1}] = 0.02;
    sc.graph.pair_periods[{1, 1}] = 0.01;
    sc.graph.pair_periods[{2, 2}] = 0.01;

    for (int i = 0; i < 2; ++i) {
        FollowerPlant p;
        p.order = 1;
        p.f = Nonlinearity::paper();
        p.delay = 0.15;
        p.ell = 1.1;
        p.x0 = Vector::Constant(1, i == 0 ? 0.5 : -0.5);
        sc.plants.push_back(p);

        ControllerConfig cfg;
        cfg.k = RowVector::Constant(1, -5.0);
        cfg.d_hat = 0.15;
        cfg.nx = 40;
        cfg.ell = 1.1;
        sc.controllers.push_back(cfg);
    }
    sc.observer = default_observer();
    sc.t_end = t_end;
    sc.h = 1e-3;
    return sc;
}

}  // namespace petcor::testing
