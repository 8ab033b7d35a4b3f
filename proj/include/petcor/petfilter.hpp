#pragma once

#include "petcor/history.hpp"
#include "petcor/linalg.hpp"
#include "petcor/observer.hpp"
#include "petcor/plant.hpp"
#include "petcor/predictor.hpp"

namespace petcor {

struct FilterParams {
    double l = 0.0;          // filter gain L
    double cal_t = 0.0;      // sensor sampling period, seconds
    double delta_phi = 1.0;  // trigger threshold scale
    double gamma_phi = 1.0;  // trigger threshold decay rate

    void validate() const;
};

/// State of the sensor-to-controller filter. Two kinds of holds coexist:
/// the measurement phi is held at the last *event* instant, while the filter
/// state hold refreshes at *every* sampling instant.
struct FilterState {
    double x_hat = 0.0;
    double last_sample_t = 0.0;
    double x_hat_at_sample = 0.0;
    double last_event_phi = 0.0;
    double last_event_t = 0.0;
};

/// Sensor measurement phi = Y - F * (held leader estimate of the agent's own
/// observer record). Uses only discrete observer snapshots.
double measure_phi(double y, const BroadcastRecord& observer_self_record,
                   const RowVector& f_row, double t);

/// Filter dynamics
///   x_hat' = f_bar(x_hat, v_hat) + u_hat(0, t) - L (phi_hold - x_hat_hold),
/// with u_hat(0, t) = hist(t - D_hat) - R(v_hat, S_hat). First-order plants
/// only (the chain shifts collapse to F v_hat).
double filter_rhs(const FilterState& fs, const Vector& v_hat, const Matrix& s_hat,
                  const InputHistory& hist, const FollowerPlant& plant,
                  const ControllerConfig& cfg, const FilterParams& params, double t);

struct SensorTrigger {
    bool fire = false;
    double deviation = 0.0;
    double threshold = 0.0;
};

/// Sensor-side trigger at sampling instant tau: fires when
/// |phi(tau) - phi(last event)| strictly exceeds delta_phi e^{-gamma_phi tau}.
/// The caller refreshes the event hold on fire; the sample hold of x_hat is
/// refreshed at every sampling instant regardless.
SensorTrigger trigger_check_sensor(double phi_now, const FilterState& fs,
                                   const FilterParams& params, double tau);

}  // namespace petcor
