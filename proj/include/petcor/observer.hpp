#pragma once

#include <string>
#include <vector>

#include "petcor/linalg.hpp"

namespace petcor {

/// Per-follower estimate of the leader matrix and state.
struct ObserverState {
    Matrix s_hat;
    Vector v_hat;
};

/// Snapshot held by the receiver of a directed pair since the last broadcast.
/// Between events the leader-state part is extrapolated with the frozen
/// matrix snapshot (held_estimate below).
struct BroadcastRecord {
    double t_event = 0.0;
    Matrix s_snapshot;
    Vector v_snapshot;
};

struct ObserverParams {
    double kappa1 = 1.0;
    double kappa2 = 1.0;
    double delta_s = 1.0;
    double delta_v = 1.0;
    double gamma_s = 1.0;
    double gamma_v = 1.0;

    void validate() const;
    double kappa() const { return kappa1 > kappa2 ? kappa1 : kappa2; }
};

/// Extrapolated leader state e^{S_snap (t - t_event)} v_snap. For leader
/// records the snapshot matrix is the true S, so the held value equals v(t)
/// exactly. Requires t >= t_event.
Vector held_estimate(const BroadcastRecord& rec, double t);

/// One incoming consensus edge: weight a_ij and the held record from sender j.
struct NeighborInput {
    double weight = 0.0;
    const BroadcastRecord* record = nullptr;
};

struct ObserverDerivative {
    Matrix ds;
    Vector dv;
};

/// Continuous observer right-hand side. The consensus sums use only held
/// snapshots, never live neighbor states:
///   S_hat' = kappa1 sum_j a_ij (S_snap_j - S_snap_self)
///   v_hat' = S_hat v_hat + kappa2 sum_j a_ij (held_j(t) - held_self(t))
ObserverDerivative observer_rhs(const ObserverState& self,
                                const std::vector<NeighborInput>& neighbors,
                                const BroadcastRecord& self_record,
                                const ObserverParams& params, double t);

/// Outcome of one periodic trigger evaluation for a directed pair.
struct TriggerDecision {
    bool fire_s = false;
    bool fire_v = false;
    double dev_s = 0.0;
    double dev_v = 0.0;
    double thr_s = 0.0;
    double thr_v = 0.0;

    bool fired() const { return fire_s || fire_v; }
};

/// Evaluates the pair trigger at sampling instant tau: the sender monitors
/// its current estimate against the snapshot last delivered to this receiver.
/// Fires when the Frobenius deviation of S_hat, or the deviation of v_hat
/// from the held extrapolation, strictly exceeds its decaying threshold
/// delta e^{-gamma tau}. Equality does not fire. If either condition fires,
/// both snapshots are retransmitted.
/// tau must lie on the pair's sampling grid (pair_period) and after the last
/// event.
TriggerDecision trigger_check_pair(const ObserverState& sender, const BroadcastRecord& last,
                                   const ObserverParams& params, double tau,
                                   double pair_period);

}  // namespace petcor
