#include "petcor/observer.hpp"

#include <cmath>

#include "petcor/errors.hpp"

namespace petcor {

void ObserverParams::validate() const {
    if (kappa1 <= 0.0 || kappa2 <= 0.0 || delta_s <= 0.0 || delta_v <= 0.0 ||
        gamma_s <= 0.0 || gamma_v <= 0.0) {
        throw ContractViolation("observer params: all gains and thresholds must be strictly positive");
    }
}

Vector held_estimate(const BroadcastRecord& rec, double t) {
    if (t < rec.t_event) {
        throw ContractViolation("held_estimate: query before the record's event time");
    }
    return expm(rec.s_snapshot, t - rec.t_event) * rec.v_snapshot;
}

ObserverDerivative observer_rhs(const ObserverState& self,
                                const std::vector<NeighborInput>& neighbors,
                                const BroadcastRecord& self_record,
                                const ObserverParams& params, double t) {
    const Vector held_self = held_estimate(self_record, t);

    Matrix ds = Matrix::Zero(self.s_hat.rows(), self.s_hat.cols());
    Vector dv_consensus = Vector::Zero(self.v_hat.size());
    for (const NeighborInput& nb : neighbors) {
        if (nb.record == nullptr) {
            throw ContractViolation("observer_rhs: missing neighbor record");
        }
        ds += nb.weight * (nb.record->s_snapshot - self_record.s_snapshot);
        dv_consensus += nb.weight * (held_estimate(*nb.record, t) - held_self);
    }

    ObserverDerivative d;
    d.ds = params.kappa1 * ds;
    d.dv = self.s_hat * self.v_hat + params.kappa2 * dv_consensus;
    return d;
}

TriggerDecision trigger_check_pair(const ObserverState& sender, const BroadcastRecord& last,
                                   const ObserverParams& params, double tau,
                                   double pair_period) {
    const double k = std::round(tau / pair_period);
    if (std::abs(tau - k * pair_period) > 1e-9 * std::max(1.0, std::abs(tau))) {
        throw SchedulingFault("pair trigger evaluated off the sampling grid", tau);
    }
    if (tau <= last.t_event) {
        throw ContractViolation("trigger_check_pair: tau must follow the last event");
    }

    TriggerDecision d;
    d.thr_s = params.delta_s * std::exp(-params.gamma_s * tau);
    d.thr_v = params.delta_v * std::exp(-params.gamma_v * tau);
    d.dev_s = (sender.s_hat - last.s_snapshot).norm();  // Frobenius
    d.dev_v = (sender.v_hat - held_estimate(last, tau)).norm();
    d.fire_s = d.dev_s > d.thr_s;
    d.fire_v = d.dev_v > d.thr_v;
    return d;
}

}  // namespace petcor
