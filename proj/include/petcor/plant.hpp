#pragma once

#include <string>
#include <vector>

#include "petcor/history.hpp"
#include "petcor/linalg.hpp"

namespace petcor {

enum class NonlinKind {
    Zero,      // f(x) = 0
    Linear,    // f(x) = a x             (test oracle)
    PaperSin,  // f(x) = x + 0.1 sin(x)
    RobustLog  // f(x) = 0.1 sin(x) x + cos^2(x) ln(1 + x^2)
};

/// Scalar plant nonlinearity from the catalog, with its derivative (used by
/// the transport-coordinate diagnostics) and Lipschitz information. Entries
/// whose slope bound holds globally are "claimed"; RobustLog grows without
/// bound, so its `lipschitz` is an operating-range estimate only.
struct Nonlinearity {
    NonlinKind kind = NonlinKind::Zero;
    double a = 1.0;  // Linear slope

    double eval(double x) const;
    double deriv(double x) const;
    double lipschitz() const;
    bool lipschitz_claimed() const;
    std::string name() const;

    static Nonlinearity zero() { return {NonlinKind::Zero}; }
    static Nonlinearity linear(double slope) { return {NonlinKind::Linear, slope}; }
    static Nonlinearity paper() { return {NonlinKind::PaperSin}; }
    static Nonlinearity robust() { return {NonlinKind::RobustLog}; }
    static Nonlinearity from_name(const std::string& name, double slope = 1.0);
};

/// Additive disturbance a sin(t) + b cos(t) on the driven channel.
struct Disturbance {
    double sin_amp = 0.0;
    double cos_amp = 0.0;

    double eval(double t) const;
    bool active() const { return sin_amp != 0.0 || cos_amp != 0.0; }
};

/// One follower: X' = f(X) + dd(t) + U(t - D) in first order, the
/// chain-of-integrators form for order n (shift on channels 1..n-1, f and the
/// delayed input on channel n), or the strict-feedback form when per-channel
/// nonlinearities are given. The catalog f reads the first state component in
/// the chain form; strict-feedback channel k reads its own component.
struct FollowerPlant {
    int order = 1;
    Nonlinearity f;
    std::vector<Nonlinearity> strict_feedback;  // size order-1 when used, else empty
    double delay = 0.0;                         // true input delay D, seconds
    double ell = 0.0;                           // Lipschitz bound used by the control design
    Disturbance disturbance;
    Vector x0;

    void validate(std::vector<std::string>* warnings = nullptr) const;
    bool is_strict_feedback() const { return !strict_feedback.empty(); }
};

/// State derivative of one follower given the already-delayed input value.
Vector plant_rhs(const FollowerPlant& p, const Vector& x, double u_delayed, double t);

/// U(t - D) from the stored input history (linear interpolation; zero before
/// the run start).
double delayed_input(const InputHistory& hist, double t, double d_true);

}  // namespace petcor
