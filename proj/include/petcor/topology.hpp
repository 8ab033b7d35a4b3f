#pragma once

#include <map>
#include <utility>

#include "petcor/linalg.hpp"

namespace petcor {

/// Directed communication graph of one leader (node 0) and N followers.
/// adjacency(i, j) > 0 means node i receives from node j. Sampling periods are
/// kept per communicating pair (receiver, sender), including the mandatory
/// self pair (i, i) of every follower.
struct CommGraph {
    int followers = 0;
    Matrix adjacency;                                   // (N+1) x (N+1), zero diagonal
    std::map<std::pair<int, int>, double> pair_periods; // (receiver, sender) -> seconds

    /// Throws ContractViolation on malformed weights, a missing self period,
    /// or a non-positive period.
    void validate() const;

    double max_period() const;
};

/// True iff every follower is reachable from the leader along directed edges.
bool has_spanning_tree(const CommGraph& g);

/// Pinned follower Laplacian: H(i,i) = sum_j a_ij, H(i,j) = -a_ij for i != j
/// (follower indices 1..N mapped to 0..N-1). Requires a spanning tree; then
/// all eigenvalues of H have positive real part.
Matrix h_matrix(const CommGraph& g);

/// Solves Q A1 + A1ᵀ Q = 2 I for symmetric positive definite Q, where
/// A1 = H ⊗ I_{exo_dim}. The equation is vectorized to a dense linear system
/// and solved by LU; sizes stay tiny. Throws SimulationFault when A1 is not
/// positively stable or the residual exceeds 1e-8.
Matrix lyapunov_q(const Matrix& h, int exo_dim);

struct SamplingBound {
    double m = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
    double m3 = 0.0;
};

/// Maximum admissible sampling/gain product M = min{M1, M2, M3} with
///   M1 = 1 / (8 (2N+5) ||A1||^2),
///   M2 = 1 / (3 N sum_i ||Q A_i1||^2),
///   M3 = sqrt(1 / (3 (2N+5) sum_i ||A_i1||^2)),
/// where A_i1 = H_i ⊗ I and H_i keeps row i of H, zeroing the rest. The
/// observer contract is kappa * max T <= M.
SamplingBound max_sampling_bound(const CommGraph& g, int exo_dim);

}  // namespace petcor
