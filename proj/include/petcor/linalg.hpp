#pragma once

#include <Eigen/Dense>

namespace petcor {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

/// Matrix exponential e^{A t} by scaling-and-squaring with a truncated Taylor
/// series (order 14 after scaling ||At||/2^k <= 0.5). Relative error is below
/// 1e-12 for ||At|| <= 10, which covers every leader/observer matrix here.
/// Throws ContractViolation on non-square or non-finite input.
Matrix expm(const Matrix& a, double t = 1.0);

/// Spectral norm (largest singular value) via power iteration on AᵀA.
/// Converges to 1e-12 relative tolerance, capped at 1e4 iterations.
double spectral_norm(const Matrix& a);

/// Kronecker product a ⊗ b.
Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace petcor
