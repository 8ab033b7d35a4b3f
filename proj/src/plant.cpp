#include "petcor/plant.hpp"

#include <cmath>

#include "petcor/errors.hpp"

namespace petcor {

double Nonlinearity::eval(double x) const {
    switch (kind) {
        case NonlinKind::Zero:
            return 0.0;
        case NonlinKind::Linear:
            return a * x;
        case NonlinKind::PaperSin:
            return x + 0.1 * std::sin(x);
        case NonlinKind::RobustLog:
            return 0.1 * std::sin(x) * x + std::cos(x) * std::cos(x) * std::log1p(x * x);
    }
    return 0.0;
}

double Nonlinearity::deriv(double x) const {
    switch (kind) {
        case NonlinKind::Zero:
            return 0.0;
        case NonlinKind::Linear:
            return a;
        case NonlinKind::PaperSin:
            return 1.0 + 0.1 * std::cos(x);
        case NonlinKind::RobustLog:
            return 0.1 * std::sin(x) + 0.1 * x * std::cos(x) -
                   std::sin(2.0 * x) * std::log1p(x * x) +
                   std::cos(x) * std::cos(x) * 2.0 * x / (1.0 + x * x);
    }
    return 0.0;
}

double Nonlinearity::lipschitz() const {
    switch (kind) {
        case NonlinKind::Zero:
            return 0.0;
        case NonlinKind::Linear:
            return std::abs(a);
        case NonlinKind::PaperSin:
            return 1.1;
        case NonlinKind::RobustLog:
            return 2.5;  // empirical over |x| <= 3; the slope is unbounded globally
    }
    return 0.0;
}

bool Nonlinearity::lipschitz_claimed() const {
    return kind != NonlinKind::RobustLog;
}

std::string Nonlinearity::name() const {
    switch (kind) {
        case NonlinKind::Zero:
            return "zero";
        case NonlinKind::Linear:
            return "linear";
        case NonlinKind::PaperSin:
            return "paper_f";
        case NonlinKind::RobustLog:
            return "robust_f";
    }
    return "?";
}

Nonlinearity Nonlinearity::from_name(const std::string& name, double slope) {
    if (name == "zero") return zero();
    if (name == "linear") return linear(slope);
    if (name == "paper_f") return paper();
    if (name == "robust_f") return robust();
    throw ContractViolation("unknown nonlinearity '" + name + "'");
}

double Disturbance::eval(double t) const {
    return sin_amp * std::sin(t) + cos_amp * std::cos(t);
}

void FollowerPlant::validate(std::vector<std::string>* warnings) const {
    if (order < 1) {
        throw ContractViolation("plant: order must be >= 1");
    }
    if (delay <= 0.0) {
        throw ContractViolation("plant: input delay must be positive");
    }
    if (x0.size() != order) {
        throw ContractViolation("plant: initial state dimension does not match order");
    }
    if (!strict_feedback.empty() && static_cast<int>(strict_feedback.size()) != order - 1) {
        throw ContractViolation("plant: strict-feedback needs one nonlinearity per channel below the top");
    }
    if (ell < 0.0) {
        throw ContractViolation("plant: Lipschitz bound must be non-negative");
    }
    if (warnings && !f.lipschitz_claimed()) {
        warnings->push_back("plant: '" + f.name() +
                            "' has no global slope bound; ell=" + std::to_string(ell) +
                            " is an operating-range estimate");
    }
}

Vector plant_rhs(const FollowerPlant& p, const Vector& x, double u_delayed, double t) {
    const int n = p.order;
    Vector dx(n);
    if (p.is_strict_feedback()) {
        for (int k = 0; k < n - 1; ++k) {
            dx(k) = x(k + 1) + p.strict_feedback[k].eval(x(k));
        }
        dx(n - 1) = p.f.eval(x(n - 1)) + p.disturbance.eval(t) + u_delayed;
    } else {
        for (int k = 0; k < n - 1; ++k) dx(k) = x(k + 1);
        dx(n - 1) = p.f.eval(x(0)) + p.disturbance.eval(t) + u_delayed;
    }
    return dx;
}

double delayed_input(const InputHistory& hist, double t, double d_true) {
    return hist.value_at(t - d_true);
}

}  // namespace petcor
