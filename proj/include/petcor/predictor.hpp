#pragma once

#include <span>
#include <string>
#include <vector>

#include "petcor/history.hpp"
#include "petcor/linalg.hpp"
#include "petcor/plant.hpp"

namespace petcor {

/// Per-follower control configuration. K is a 1 x order row; the first-order
/// admissibility gate ell + K < 0 is enforced by validate_controller (called
/// during scenario validation, not at aggregate construction, so diagnostic
/// code can build transforms with arbitrary gains).
struct ControllerConfig {
    RowVector k;        // control gain row
    double d_hat = 0.0; // assumed input delay, seconds
    int nx = 40;        // prediction grid intervals on x in [0, 1]
    double ell = 0.0;   // Lipschitz bound used for admissibility
};

void validate_controller(const ControllerConfig& cfg, int plant_order);

/// Exosystem-manifold shifts (F v, F S v, ..., F S^{n-1} v): the reference
/// trajectory of each chain channel. Subtracting them from the plant state
/// gives the error coordinates the predictor works in.
Vector exosystem_shifts(int order, const Vector& v, const Matrix& s, const RowVector& f_row);

/// Shifted nonlinearity: value of the plant drift in the error coordinates
/// X_bar = X - (F v, F S v, ..., F S^{n-1} v), anchored so that
/// f_bar(0, v) = 0 on the driven channel. `v` may be a true or an estimated
/// leader state, with `s` the matching matrix.
double f_bar(const FollowerPlant& p, const Vector& x_bar, const Vector& v,
             const Matrix& s, const RowVector& f_row);

/// Residual between the leader-induced drift and the plant drift on the
/// exosystem manifold: F S^n v - f(exosystem shifts). Subtracting it from the
/// stored control recovers the zero-anchored distributed input.
double residual_r(const FollowerPlant& p, const Vector& v_arg, const Matrix& s_arg,
                  const RowVector& f_row);

/// Shifted-state prediction on the transport coordinate x in [0, 1]:
/// marches chi(0) = X_hat to chi(1) ~ X_bar(t + D_hat) through
///   dchi/dx = D_hat * ( f_c(chi, e^{S_hat D_hat x} v_hat) + u_hat(x, t) ),
///   u_hat(x, t) = hist(t + (x-1) D_hat) - R(e^{S_hat D_hat x} v_hat, S_hat),
/// with a classical 4-stage fixed-step march (Nx intervals) and linear
/// interpolation of the stored control between samples. Returns the
/// order x (Nx+1) grid of chi values. Throws SimulationFault on a history gap
/// or if the state blows up inside [0, 1].
Matrix predict(const Vector& x_hat, const Vector& v_hat, const Matrix& s_hat,
               const InputHistory& hist, const FollowerPlant& plant,
               const ControllerConfig& cfg, const RowVector& f_row, double t);

/// Controller output U = K chi(1) + R(e^{S_hat D_hat} v_hat, S_hat); the grid
/// endpoint subsumes the prediction integral.
double control(const Matrix& chi_grid, const Vector& v_hat, const Matrix& s_hat,
               const FollowerPlant& plant, const ControllerConfig& cfg,
               const RowVector& f_row);

/// Companion-form pole placement for order-n gains: returns the K row whose
/// closed-loop chain chi' = (chi_2, ..., chi_n, K chi) has the given poles.
/// Warns (does not error) when the Lipschitz bound reaches the pole depth.
RowVector place_companion_gain(std::span<const double> poles, double ell,
                               std::vector<std::string>* warnings = nullptr);

}  // namespace petcor
