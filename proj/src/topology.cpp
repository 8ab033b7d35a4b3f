#include "petcor/topology.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <cmath>
#include <queue>
#include <vector>

#include "petcor/errors.hpp"

namespace petcor {

void CommGraph::validate() const {
    const int n = followers;
    if (n < 1) {
        throw ContractViolation("graph: at least one follower required");
    }
    if (adjacency.rows() != n + 1 || adjacency.cols() != n + 1) {
        throw ContractViolation("graph: adjacency must be (N+1) x (N+1)");
    }
    if ((adjacency.array() < 0.0).any()) {
        throw ContractViolation("graph: negative edge weight");
    }
    for (int i = 0; i <= n; ++i) {
        if (adjacency(i, i) != 0.0) {
            throw ContractViolation("graph: self weights must be zero (self pairs carry only a period)");
        }
    }
    if (adjacency.row(0).cwiseAbs().maxCoeff() != 0.0) {
        throw ContractViolation("graph: the leader receives from nobody");
    }
    for (int i = 1; i <= n; ++i) {
        if (!pair_periods.count({i, i})) {
            throw ContractViolation("graph: missing self-sampling period for follower " + std::to_string(i));
        }
        for (int j = 0; j <= n; ++j) {
            if (adjacency(i, j) > 0.0 && !pair_periods.count({i, j})) {
                throw ContractViolation("graph: missing period for pair (" + std::to_string(i) + "," +
                                        std::to_string(j) + ")");
            }
        }
    }
    for (const auto& [pair, period] : pair_periods) {
        if (period <= 0.0) {
            throw ContractViolation("graph: non-positive sampling period for pair (" +
                                    std::to_string(pair.first) + "," + std::to_string(pair.second) + ")");
        }
    }
}

double CommGraph::max_period() const {
    double t = 0.0;
    for (const auto& [pair, period] : pair_periods) t = std::max(t, period);
    return t;
}

bool has_spanning_tree(const CommGraph& g) {
    const int n = g.followers;
    std::vector<bool> reached(n + 1, false);
    std::queue<int> frontier;
    reached[0] = true;
    frontier.push(0);
    while (!frontier.empty()) {
        const int j = frontier.front();
        frontier.pop();
        for (int i = 1; i <= n; ++i) {
            if (!reached[i] && g.adjacency(i, j) > 0.0) {
                reached[i] = true;
                frontier.push(i);
            }
        }
    }
    for (int i = 1; i <= n; ++i) {
        if (!reached[i]) return false;
    }
    return true;
}

Matrix h_matrix(const CommGraph& g) {
    if (!has_spanning_tree(g)) {
        throw SimulationFault("h_matrix: graph has no directed spanning tree from the leader");
    }
    const int n = g.followers;
    Matrix h = Matrix::Zero(n, n);
    for (int i = 1; i <= n; ++i) {
        double row_sum = 0.0;
        for (int j = 0; j <= n; ++j) row_sum += g.adjacency(i, j);
        h(i - 1, i - 1) = row_sum;
        for (int j = 1; j <= n; ++j) {
            if (j != i) h(i - 1, j - 1) = -g.adjacency(i, j);
        }
    }
    return h;
}

Matrix lyapunov_q(const Matrix& h, int exo_dim) {
    if (h.rows() != h.cols() || exo_dim < 1) {
        throw ContractViolation("lyapunov_q: bad dimensions");
    }
    const Matrix a1 = kron(h, Matrix::Identity(exo_dim, exo_dim));
    const Eigen::Index n = a1.rows();

    Eigen::EigenSolver<Matrix> eig(a1, /*computeEigenvectors=*/false);
    if (eig.eigenvalues().real().minCoeff() <= 0.0) {
        throw SimulationFault("lyapunov_q: A1 is not positively stable, equation unsolvable");
    }

    // vec(Q A1 + A1ᵀ Q) = (A1ᵀ ⊗ I + I ⊗ A1ᵀ) vec(Q)  (column-major vec)
    const Matrix identity = Matrix::Identity(n, n);
    const Matrix system = kron(a1.transpose(), identity) + kron(identity, a1.transpose());
    Vector rhs = Vector::Zero(n * n);
    for (Eigen::Index i = 0; i < n; ++i) rhs(i * n + i) = 2.0;

    Vector q_vec = system.partialPivLu().solve(rhs);
    Matrix q = Eigen::Map<Matrix>(q_vec.data(), n, n);
    q = 0.5 * (q + q.transpose().eval());

    const double residual = (q * a1 + a1.transpose() * q - 2.0 * identity).norm();
    if (!(residual <= 1e-8)) {
        throw SimulationFault("lyapunov_q: residual " + std::to_string(residual) + " exceeds 1e-8");
    }
    return q;
}

SamplingBound max_sampling_bound(const CommGraph& g, int exo_dim) {
    const Matrix h = h_matrix(g);
    const int n = g.followers;
    const Matrix identity = Matrix::Identity(exo_dim, exo_dim);
    const Matrix a1 = kron(h, identity);
    const Matrix q = lyapunov_q(h, exo_dim);

    double sum_qa = 0.0;
    double sum_a = 0.0;
    for (int i = 0; i < n; ++i) {
        Matrix h_i = Matrix::Zero(n, n);
        h_i.row(i) = h.row(i);
        const Matrix a_i1 = kron(h_i, identity);
        const double na = spectral_norm(a_i1);
        const double nqa = spectral_norm(q * a_i1);
        sum_a += na * na;
        sum_qa += nqa * nqa;
    }

    const double norm_a1 = spectral_norm(a1);
    SamplingBound b;
    b.m1 = 1.0 / (8.0 * (2.0 * n + 5.0) * norm_a1 * norm_a1);
    b.m2 = 1.0 / (3.0 * n * sum_qa);
    b.m3 = std::sqrt(1.0 / (3.0 * (2.0 * n + 5.0) * sum_a));
    b.m = std::min({b.m1, b.m2, b.m3});
    return b;
}

}  // namespace petcor
