#include "petcor/predictor.hpp"

#include <cmath>

#include "petcor/errors.hpp"

namespace petcor {

void validate_controller(const ControllerConfig& cfg, int plant_order) {
    if (cfg.k.size() != plant_order) {
        throw ContractViolation("controller: gain row length must equal the plant order");
    }
    if (cfg.d_hat <= 0.0) {
        throw ContractViolation("controller: assumed delay must be positive");
    }
    if (cfg.nx < 16) {
        throw ContractViolation("controller: prediction grid needs at least 16 intervals");
    }
    if (plant_order == 1 && !(cfg.ell + cfg.k(0) < 0.0)) {
        throw ContractViolation("controller: gain is not admissible, ell + K must be negative");
    }
}

Vector exosystem_shifts(int order, const Vector& v, const Matrix& s, const RowVector& f_row) {
    Vector shifts(order);
    RowVector row = f_row;
    for (int k = 0; k < order; ++k) {
        shifts(k) = row.dot(v);
        if (k + 1 < order) row = row * s;
    }
    return shifts;
}

double f_bar(const FollowerPlant& p, const Vector& x_bar, const Vector& v,
             const Matrix& s, const RowVector& f_row) {
    if (p.is_strict_feedback()) {
        // Top channel reads its own state component.
        const double top = exosystem_shifts(p.order, v, s, f_row)(p.order - 1);
        return p.f.eval(x_bar(p.order - 1) + top) - p.f.eval(top);
    }
    const double shift = f_row.dot(v);  // chain-form catalog f reads the first component
    return p.f.eval(x_bar(0) + shift) - p.f.eval(shift);
}

double residual_r(const FollowerPlant& p, const Vector& v_arg, const Matrix& s_arg,
                  const RowVector& f_row) {
    RowVector row = f_row;
    for (int k = 0; k < p.order; ++k) row = row * s_arg;  // F S^n
    const double drive = row.dot(v_arg);
    if (p.is_strict_feedback()) {
        const Vector shifts = exosystem_shifts(p.order, v_arg, s_arg, f_row);
        return drive - p.f.eval(shifts(p.order - 1));
    }
    return drive - p.f.eval(f_row.dot(v_arg));
}

namespace {

// Chain (or strict-feedback) right-hand side of the prediction march at one
// transport position: d chi / dx = D_hat * (shifted drift + u_hat e_n).
Vector prediction_rhs(const FollowerPlant& p, const Vector& chi, const Vector& w,
                      const Matrix& s_hat, const RowVector& f_row, double u_hat,
                      double d_hat) {
    const int n = p.order;
    Vector g(n);
    if (p.is_strict_feedback()) {
        const Vector shifts = exosystem_shifts(n, w, s_hat, f_row);
        for (int k = 0; k < n - 1; ++k) {
            g(k) = chi(k + 1) + p.strict_feedback[k].eval(chi(k) + shifts(k));
        }
        g(n - 1) = (p.f.eval(chi(n - 1) + shifts(n - 1)) - p.f.eval(shifts(n - 1))) + u_hat;
    } else {
        const double shift = f_row.dot(w);
        for (int k = 0; k < n - 1; ++k) g(k) = chi(k + 1);
        g(n - 1) = (p.f.eval(chi(0) + shift) - p.f.eval(shift)) + u_hat;
    }
    return g * d_hat;
}

}  // namespace

Matrix predict(const Vector& x_hat, const Vector& v_hat, const Matrix& s_hat,
               const InputHistory& hist, const FollowerPlant& plant,
               const ControllerConfig& cfg, const RowVector& f_row, double t) {
    const int n = plant.order;
    const int nx = cfg.nx;
    const double dx = 1.0 / nx;
    const double d_hat = cfg.d_hat;

    // Leader-state propagation w(x) = e^{S_hat D_hat x} v_hat on the half-grid
    // x_j = j / (2 Nx), built by repeated half-step propagators.
    const Matrix p_half = expm(s_hat, d_hat * dx * 0.5);
    std::vector<Vector> w(2 * nx + 1);
    w[0] = v_hat;
    for (int j = 1; j <= 2 * nx; ++j) w[j] = p_half * w[j - 1];

    // F S_hat^n row for the residual; f's manifold argument comes from w.
    RowVector fs_n = f_row;
    for (int k = 0; k < n; ++k) fs_n = fs_n * s_hat;

    auto u_hat_at = [&](int half_index) {
        // Division keeps the endpoint exact: x = 1 queries the current instant.
        const double x = static_cast<double>(half_index) / (2.0 * nx);
        const double u_check = hist.value_at(t + (x - 1.0) * d_hat);
        double r;
        if (plant.is_strict_feedback()) {
            const Vector shifts = exosystem_shifts(n, w[half_index], s_hat, f_row);
            r = fs_n.dot(w[half_index]) - plant.f.eval(shifts(n - 1));
        } else {
            r = fs_n.dot(w[half_index]) - plant.f.eval(f_row.dot(w[half_index]));
        }
        return u_check - r;
    };

    Matrix grid(n, nx + 1);
    Vector chi = x_hat;
    grid.col(0) = chi;
    for (int step = 0; step < nx; ++step) {
        const int j0 = 2 * step;
        const double u0 = u_hat_at(j0);
        const double um = u_hat_at(j0 + 1);
        const double u1 = u_hat_at(j0 + 2);

        const Vector k1 = prediction_rhs(plant, chi, w[j0], s_hat, f_row, u0, d_hat);
        const Vector k2 = prediction_rhs(plant, chi + 0.5 * dx * k1, w[j0 + 1], s_hat, f_row, um, d_hat);
        const Vector k3 = prediction_rhs(plant, chi + 0.5 * dx * k2, w[j0 + 1], s_hat, f_row, um, d_hat);
        const Vector k4 = prediction_rhs(plant, chi + dx * k3, w[j0 + 2], s_hat, f_row, u1, d_hat);
        chi += (dx / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        if (!chi.allFinite()) {
            throw SimulationFault("prediction overflow: state blew up inside the transport interval", t);
        }
        grid.col(step + 1) = chi;
    }
    return grid;
}

double control(const Matrix& chi_grid, const Vector& v_hat, const Matrix& s_hat,
               const FollowerPlant& plant, const ControllerConfig& cfg,
               const RowVector& f_row) {
    const Vector w_end = expm(s_hat, cfg.d_hat) * v_hat;
    return cfg.k.dot(chi_grid.col(chi_grid.cols() - 1)) +
           residual_r(plant, w_end, s_hat, f_row);
}

RowVector place_companion_gain(std::span<const double> poles, double ell,
                               std::vector<std::string>* warnings) {
    const int n = static_cast<int>(poles.size());
    if (n < 1) {
        throw ContractViolation("place_companion_gain: need at least one pole");
    }
    // Expand prod (lambda - p_i) = lambda^n + c_{n-1} lambda^{n-1} + ... + c_0.
    std::vector<double> c(n + 1, 0.0);
    c[0] = 1.0;
    int deg = 0;
    for (double p : poles) {
        if (p >= 0.0) {
            throw ContractViolation("place_companion_gain: poles must be strictly negative");
        }
        for (int k = deg + 1; k >= 1; --k) c[k] = c[k - 1] - p * c[k];
        c[0] *= -p;
        ++deg;
    }
    // Closed-loop chain has characteristic polynomial
    // lambda^n - k_n lambda^{n-1} - ... - k_1, so k_j = -c_{j-1}.
    RowVector k(n);
    for (int j = 0; j < n; ++j) k(j) = -c[j];

    if (warnings) {
        double depth = -poles[0];
        for (double p : poles) depth = std::min(depth, -p);
        if (ell >= depth) {
            warnings->push_back("place_companion_gain: Lipschitz bound " + std::to_string(ell) +
                                " reaches the pole depth " + std::to_string(depth) +
                                "; closed-loop margin may be insufficient");
        }
    }
    return k;
}

}  // namespace petcor
