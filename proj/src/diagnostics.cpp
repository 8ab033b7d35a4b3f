#include "petcor/diagnostics.hpp"

#include <cmath>

#include "petcor/errors.hpp"

namespace petcor {

namespace {

// Trapezoid weights of int_0^1 (1+x) g(x)^2 dx on a uniform grid.
double weighted_energy(const Vector& g) {
    const Eigen::Index m = g.size() - 1;
    const double dx = 1.0 / static_cast<double>(m);
    double sum = 0.0;
    for (Eigen::Index k = 0; k <= m; ++k) {
        const double x = static_cast<double>(k) / static_cast<double>(m);
        const double val = (1.0 + x) * g(k) * g(k);
        sum += (k == 0 || k == m) ? 0.5 * val : val;
    }
    return sum * dx;
}

}  // namespace

BacksteppingSnapshot backstepping_snapshot(const FollowerPlant& plant,
                                           const ControllerConfig& cfg,
                                           const InputHistory& hist, const Vector& x_hat,
                                           const Vector& v_hat, const Matrix& s_hat,
                                           const Vector& v_true, const Matrix& s_true,
                                           const RowVector& f_row, double t,
                                           const Matrix* chi_reuse) {
    if (plant.order != 1) {
        throw ContractViolation("backstepping_snapshot: first-order plants only");
    }
    const int nx = cfg.nx;
    const double d_hat = cfg.d_hat;
    const double d_true = plant.delay;

    BacksteppingSnapshot snap;
    snap.grid_x.resize(nx + 1);
    snap.u_check.resize(nx + 1);
    snap.u_hat.resize(nx + 1);
    snap.u_bar.resize(nx + 1);
    snap.u_tilde.resize(nx + 1);
    snap.chi.resize(nx + 1);
    snap.w_hat.resize(nx + 1);
    snap.w_hat_x.resize(nx + 1);
    snap.theta.resize(nx + 1);

    Matrix chi_grid;
    if (chi_reuse != nullptr && chi_reuse->cols() == nx + 1) {
        chi_grid = *chi_reuse;
    } else {
        chi_grid = predict(x_hat, v_hat, s_hat, hist, plant, cfg, f_row, t);
    }

    // Leader propagation under the estimated and the true data.
    const Matrix p_hat = expm(s_hat, d_hat / nx);
    const Matrix p_true = expm(s_true, d_true / nx);
    Vector w_hat_x_state = v_hat;
    Vector w_true = v_true;

    const double k_gain = cfg.k(0);
    for (int k = 0; k <= nx; ++k) {
        const double x = static_cast<double>(k) / nx;
        snap.grid_x(k) = x;
        snap.chi(k) = chi_grid(0, k);

        snap.u_check(k) = hist.value_at(t + (x - 1.0) * d_hat);
        snap.u_hat(k) = snap.u_check(k) - residual_r(plant, w_hat_x_state, s_hat, f_row);

        const double u_raw = hist.value_at(t + (x - 1.0) * d_true);
        snap.u_bar(k) = u_raw - residual_r(plant, w_true, s_true, f_row);

        snap.u_tilde(k) = snap.u_bar(k) - snap.u_hat(k);
        snap.w_hat(k) = snap.u_hat(k) - k_gain * snap.chi(k);

        if (k < nx) {
            w_hat_x_state = p_hat * w_hat_x_state;
            w_true = p_true * w_true;
        }
    }

    // w_x by central differences, one-sided at the ends.
    const double dx = 1.0 / nx;
    snap.w_hat_x(0) = (snap.w_hat(1) - snap.w_hat(0)) / dx;
    snap.w_hat_x(nx) = (snap.w_hat(nx) - snap.w_hat(nx - 1)) / dx;
    for (int k = 1; k < nx; ++k) {
        snap.w_hat_x(k) = (snap.w_hat(k + 1) - snap.w_hat(k - 1)) / (2.0 * dx);
    }

    // theta(x) = exp( int_0^x D_hat * d f_bar / d chi dy ), cumulative trapezoid.
    Vector w_for_theta = v_hat;
    double integral = 0.0;
    double prev = plant.f.deriv(snap.chi(0) + f_row.dot(w_for_theta));
    snap.theta(0) = 1.0;
    for (int k = 1; k <= nx; ++k) {
        w_for_theta = p_hat * w_for_theta;
        const double cur = plant.f.deriv(snap.chi(k) + f_row.dot(w_for_theta));
        integral += 0.5 * dx * d_hat * (prev + cur);
        snap.theta(k) = std::exp(integral);
        prev = cur;
    }
    return snap;
}

LyapunovSample lyapunov_v(const BacksteppingSnapshot& snap, double x_bar, double d_true,
                          double d_hat, const std::array<double, 4>& lambda) {
    LyapunovSample s;
    s.parts[0] = 0.5 * x_bar * x_bar;
    s.parts[1] = 0.5 * d_true * weighted_energy(snap.u_tilde);
    s.parts[2] = 0.5 * d_hat * weighted_energy(snap.w_hat);
    s.parts[3] = 0.5 * d_hat * weighted_energy(snap.w_hat_x);
    s.total = 0.0;
    for (int k = 0; k < 4; ++k) s.total += lambda[k] * s.parts[k];
    return s;
}

namespace {

// int_{t-T}^t (th - (t-T)) d(th)^2 dth by trapezoid over the stored samples.
double windowed_energy(const std::deque<std::pair<double, double>>& samples, double cal_t,
                       double t) {
    const double start = t - cal_t;
    const double tol = 1e-9 * std::max(1.0, std::abs(t));
    if (samples.size() < 2 || samples.front().first > start + tol ||
        samples.back().first < t - tol) {
        throw SimulationFault("sampled-data energy: derivative history does not cover the window", t);
    }
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
        const auto& [t0, d0] = samples[k];
        const auto& [t1, d1] = samples[k + 1];
        if (t1 <= start) continue;
        const double g0 = std::max(t0 - start, 0.0) * d0 * d0;
        const double g1 = (t1 - start) * d1 * d1;
        sum += 0.5 * (t1 - t0) * (g0 + g1);
    }
    return sum;
}

}  // namespace

LyapunovSample lyapunov_cal_v(const BacksteppingSnapshot& snap, double x_tilde,
                              double x_hat, double d_hat,
                              const std::deque<std::pair<double, double>>& dxt_hist,
                              const std::deque<std::pair<double, double>>& dxh_hist,
                              double cal_t, double t,
                              const std::array<double, 5>& lambda) {
    LyapunovSample s;
    s.parts[0] = 0.5 * x_tilde * x_tilde;
    s.parts[1] = 0.5 * x_hat * x_hat;
    s.parts[2] = 0.5 * d_hat * weighted_energy(snap.w_hat);
    s.parts[3] = windowed_energy(dxt_hist, cal_t, t);
    s.parts[4] = windowed_energy(dxh_hist, cal_t, t);
    s.total = 0.0;
    for (int k = 0; k < 5; ++k) s.total += lambda[k] * s.parts[k];
    return s;
}

TriggerStats trigger_stats(const SimTrace& trace) {
    TriggerStats stats;
    stats.pairs = trace.pair_stats;
    for (const auto& [pair, ps] : trace.pair_stats) {
        stats.total_samples += ps.samples;
        stats.total_transmissions += ps.transmissions;
    }
    for (long c : trace.sensor_samples) stats.sensor_samples += c;
    for (long c : trace.sensor_transmissions) stats.sensor_transmissions += c;
    return stats;
}

DecayFit decay_fit(std::span<const double> t, std::span<const double> series) {
    if (t.size() != series.size()) {
        throw ContractViolation("decay_fit: time and value spans differ in length");
    }
    if (t.size() < 10) {
        throw ContractViolation("decay_fit: window shorter than 10 samples");
    }
    constexpr double kFloor = 1e-12;
    const std::size_t n = t.size();
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (series[k] < 0.0) {
            throw ContractViolation("decay_fit: series must be non-negative");
        }
        const double y = std::log(series[k] + kFloor);
        st += t[k];
        sy += y;
        stt += t[k] * t[k];
        sty += t[k] * y;
    }
    const double denom = n * stt - st * st;
    DecayFit fit;
    fit.rate = (n * sty - st * sy) / denom;
    fit.offset = (sy - fit.rate * st) / n;
    return fit;
}

}  // namespace petcor
