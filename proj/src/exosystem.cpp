#include "petcor/exosystem.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "petcor/errors.hpp"

namespace petcor {

namespace {
constexpr double kEigTol = 1e-9;
}

Exosystem Exosystem::make(Matrix s, Vector v0) {
    const Eigen::Index n = s.rows();
    RowVector f = RowVector::Zero(n);
    if (n > 0) f(0) = 1.0;
    return make(std::move(s), std::move(f), std::move(v0));
}

Exosystem Exosystem::make(Matrix s, RowVector f, Vector v0) {
    if (s.rows() != s.cols()) {
        throw ContractViolation("exosystem: S must be square");
    }
    if (!s.allFinite() || !v0.allFinite()) {
        throw ContractViolation("exosystem: non-finite entries");
    }
    if (v0.size() != s.rows() || f.size() != s.rows()) {
        throw ContractViolation("exosystem: F/v0 dimension mismatch with S");
    }
    if (s.rows() == 0) {
        throw ContractViolation("exosystem: empty system matrix");
    }
    if (f(0) != 1.0 || (s.cols() > 1 && f.tail(s.cols() - 1).cwiseAbs().maxCoeff() != 0.0)) {
        throw ContractViolation("exosystem: F must be [1, 0, ..., 0]");
    }

    Exosystem exo{std::move(s), std::move(f), std::move(v0), {}};

    Eigen::EigenSolver<Matrix> eig(exo.s, /*computeEigenvectors=*/false);
    const double max_re = eig.eigenvalues().real().cwiseAbs().maxCoeff();
    if (max_re > kEigTol) {
        exo.warnings.push_back(
            "exosystem: leader matrix is not marginally stable (max |Re lambda| = " +
            std::to_string(max_re) + ")");
    }
    return exo;
}

std::pair<Vector, double> leader_state(const Exosystem& exo, double t) {
    if (t < 0.0) {
        throw ContractViolation("leader_state: t must be non-negative");
    }
    Vector v = expm(exo.s, t) * exo.v0;
    return {v, exo.f.dot(v)};
}

}  // namespace petcor
