#include "petcor/petfilter.hpp"

#include <cmath>

#include "petcor/errors.hpp"

namespace petcor {

void FilterParams::validate() const {
    if (cal_t <= 0.0) {
        throw ContractViolation("filter params: sampling period must be positive");
    }
    if (delta_phi <= 0.0 || gamma_phi <= 0.0) {
        throw ContractViolation("filter params: trigger thresholds must be strictly positive");
    }
}

double measure_phi(double y, const BroadcastRecord& observer_self_record,
                   const RowVector& f_row, double t) {
    return y - f_row.dot(held_estimate(observer_self_record, t));
}

double filter_rhs(const FilterState& fs, const Vector& v_hat, const Matrix& s_hat,
                  const InputHistory& hist, const FollowerPlant& plant,
                  const ControllerConfig& cfg, const FilterParams& params, double t) {
    if (plant.order != 1) {
        throw ContractViolation("filter: only first-order plants are supported");
    }
    Vector x_bar(1);
    x_bar(0) = fs.x_hat;
    RowVector f_row = RowVector::Zero(v_hat.size());
    f_row(0) = 1.0;

    const double drift = f_bar(plant, x_bar, v_hat, s_hat, f_row);
    const double u_hat0 = hist.value_at(t - cfg.d_hat) - residual_r(plant, v_hat, s_hat, f_row);
    return drift + u_hat0 - params.l * (fs.last_event_phi - fs.x_hat_at_sample);
}

SensorTrigger trigger_check_sensor(double phi_now, const FilterState& fs,
                                   const FilterParams& params, double tau) {
    const double k = std::round(tau / params.cal_t);
    if (std::abs(tau - k * params.cal_t) > 1e-9 * std::max(1.0, std::abs(tau))) {
        throw SchedulingFault("sensor trigger evaluated off the sampling grid", tau);
    }
    SensorTrigger out;
    out.threshold = params.delta_phi * std::exp(-params.gamma_phi * tau);
    out.deviation = std::abs(phi_now - fs.last_event_phi);
    out.fire = out.deviation > out.threshold;
    return out;
}

}  // namespace petcor
