#pragma once

#include <array>
#include <deque>
#include <map>
#include <span>
#include <utility>

#include "petcor/engine.hpp"
#include "petcor/history.hpp"
#include "petcor/linalg.hpp"
#include "petcor/plant.hpp"
#include "petcor/predictor.hpp"

namespace petcor {

/// Transport-coordinate grids of all analysis signals at one instant, for a
/// first-order follower: the stored control u_check, its zero-anchored
/// versions under estimated (u_hat) and true (u_bar) leader data, their gap
/// u_tilde, the prediction chi, the boundary-anchored transform
/// w_hat = u_hat - K chi, its x-derivative, and the drift-integral factor
/// theta. Grid index k corresponds to x = k / Nx.
struct BacksteppingSnapshot {
    Vector grid_x;
    Vector u_check;
    Vector u_hat;
    Vector u_bar;
    Vector u_tilde;
    Vector chi;
    Vector w_hat;
    Vector w_hat_x;
    Vector theta;

    double w_boundary() const { return w_hat(w_hat.size() - 1); }
};

/// Builds the snapshot at time t. Uses the agent's estimated quantities for
/// u_hat/chi and the simulator's ground truth (v_true, s_true, d_true) for
/// u_bar. The input history must cover [t - max(D, D_hat), t]; u_bar needs no
/// future samples since x <= 1. When `chi_reuse` is given it must be the
/// prediction grid produced for the same inputs; otherwise the prediction is
/// recomputed. First-order plants only.
BacksteppingSnapshot backstepping_snapshot(const FollowerPlant& plant,
                                           const ControllerConfig& cfg,
                                           const InputHistory& hist, const Vector& x_hat,
                                           const Vector& v_hat, const Matrix& s_hat,
                                           const Vector& v_true, const Matrix& s_true,
                                           const RowVector& f_row, double t,
                                           const Matrix* chi_reuse = nullptr);

/// One evaluation of an energy functional: the unweighted terms and the
/// lambda-weighted total. The continuous-feedback function uses parts[0..3],
/// the sampled-data one uses parts[0..4].
struct LyapunovSample {
    std::array<double, 5> parts{};
    double total = 0.0;
};

/// Energy of the delay-compensated loop:
///   parts = { x_bar^2/2,
///             (D/2) int (1+x) u_tilde^2,
///             (D_hat/2) int (1+x) w_hat^2,
///             (D_hat/2) int (1+x) w_hat_x^2 }
/// with trapezoidal quadrature on the snapshot grid.
LyapunovSample lyapunov_v(const BacksteppingSnapshot& snap, double x_bar, double d_true,
                          double d_hat, const std::array<double, 4>& lambda);

/// Sampled-data energy of the filtered loop:
///   parts = { x_tilde^2/2, x_hat^2/2, (D_hat/2) int (1+x) w_hat^2,
///             int_{t-T}^t (th-t+T) |dx_tilde|^2 dth,
///             int_{t-T}^t (th-t+T) |dx_hat|^2 dth }
/// where the derivative buffers hold (time, value) samples of the stored
/// right-hand sides. Throws SimulationFault if the buffers do not cover
/// [t - cal_t, t].
LyapunovSample lyapunov_cal_v(const BacksteppingSnapshot& snap, double x_tilde,
                              double x_hat, double d_hat,
                              const std::deque<std::pair<double, double>>& dxt_hist,
                              const std::deque<std::pair<double, double>>& dxh_hist,
                              double cal_t, double t,
                              const std::array<double, 5>& lambda);

struct TriggerStats {
    std::map<std::pair<int, int>, PairStats> pairs;
    long total_samples = 0;
    long total_transmissions = 0;
    long sensor_samples = 0;
    long sensor_transmissions = 0;

    double network_ratio() const {
        return total_samples > 0 ? static_cast<double>(total_transmissions) / total_samples : 0.0;
    }
    double sensor_ratio() const {
        return sensor_samples > 0 ? static_cast<double>(sensor_transmissions) / sensor_samples : 0.0;
    }
};

/// Event economy of a completed run: transmissions vs sampling instants, per
/// pair and aggregate.
TriggerStats trigger_stats(const SimTrace& trace);

struct DecayFit {
    double rate = 0.0;    // slope of the log-series fit (1/s)
    double offset = 0.0;  // intercept at t = 0
};

/// Least-squares line through log(series + 1e-12) over the given window;
/// a negative rate certifies exponential decay. Needs at least 10 samples.
DecayFit decay_fit(std::span<const double> t, std::span<const double> series);

}  // namespace petcor
