#include "petcor/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "petcor/errors.hpp"

namespace petcor {

namespace {
constexpr int kTaylorOrder = 14;
constexpr double kScaleTarget = 0.5;
}  // namespace

Matrix expm(const Matrix& a, double t) {
    if (a.rows() != a.cols()) {
        throw ContractViolation("expm: matrix must be square");
    }
    if (!a.allFinite() || !std::isfinite(t)) {
        throw ContractViolation("expm: non-finite input");
    }

    const Eigen::Index n = a.rows();
    Matrix b = a * t;
    const double norm = b.cwiseAbs().rowwise().sum().maxCoeff();  // infinity norm

    int squarings = 0;
    if (norm > kScaleTarget) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / kScaleTarget)));
        b /= std::pow(2.0, squarings);
    }

    Matrix result = Matrix::Identity(n, n);
    Matrix term = Matrix::Identity(n, n);
    for (int k = 1; k <= kTaylorOrder; ++k) {
        term = (term * b) / static_cast<double>(k);
        result += term;
    }
    for (int s = 0; s < squarings; ++s) {
        result = result * result;
    }
    return result;
}

double spectral_norm(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    const Matrix ata = a.transpose() * a;
    const Eigen::Index n = ata.rows();

    // Deterministic pseudo-random start; a structured vector (all ones) can
    // be exactly orthogonal to the dominant eigenvector of graph matrices.
    std::mt19937 rng(0x9e3779b9u);
    std::uniform_real_distribution<double> dist(0.1, 1.0);
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        v(i) = dist(rng) * (rng() % 2 == 0 ? 1.0 : -1.0);
    }
    v.normalize();

    double lambda = 0.0;
    constexpr int kMaxIters = 10000;
    constexpr double kTol = 1e-12;
    for (int it = 0; it < kMaxIters; ++it) {
        Vector w = ata * v;
        const double wn = w.norm();
        if (wn == 0.0) return 0.0;
        w /= wn;
        const double next = w.dot(ata * w);
        if (std::abs(next - lambda) <= kTol * std::max(1.0, std::abs(next))) {
            lambda = next;
            break;
        }
        lambda = next;
        v = w;
    }
    return std::sqrt(std::max(lambda, 0.0));
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

}  // namespace petcor
