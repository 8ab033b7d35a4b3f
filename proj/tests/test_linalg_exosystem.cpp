#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "petcor/errors.hpp"
#include "petcor/exosystem.hpp"
#include "petcor/linalg.hpp"

using namespace petcor;

namespace {

Matrix rotation_generator() {
    Matrix s(2, 2);
    s << 0.0, 1.0, -1.0, 0.0;
    return s;
}

Matrix random_matrix(std::mt19937& rng, int n, double norm_cap) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Matrix a(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) a(r, c) = dist(rng);
    }
    const double norm = spectral_norm(a);
    if (norm > norm_cap) a *= norm_cap / norm;
    return a;
}

}  // namespace

TEST_CASE("expm at t=0 is the identity") {
    std::mt19937 rng(7);
    const Matrix a = random_matrix(rng, 4, 5.0);
    CHECK((expm(a, 0.0) - Matrix::Identity(4, 4)).norm() == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("expm of the rotation generator at pi/2") {
    const Matrix e = expm(rotation_generator(), std::numbers::pi / 2.0);
    Matrix expected(2, 2);
    expected << 0.0, 1.0, -1.0, 0.0;
    CHECK((e - expected).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("expm of a nilpotent matrix truncates") {
    Matrix n(2, 2);
    n << 0.0, 1.0, 0.0, 0.0;
    const Matrix e = expm(n, 1.0);
    Matrix expected(2, 2);
    expected << 1.0, 1.0, 0.0, 1.0;
    CHECK((e - expected).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("expm rejects bad input") {
    CHECK_THROWS_AS(expm(Matrix::Zero(2, 3), 1.0), ContractViolation);
    Matrix bad = Matrix::Zero(2, 2);
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(expm(bad, 1.0), ContractViolation);
    CHECK_THROWS_AS(expm(Matrix::Identity(2, 2), std::numeric_limits<double>::infinity()),
                    ContractViolation);
}

TEST_CASE("expm semigroup property on random matrices") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> tdist(-2.0, 2.0);
    for (int trial = 0; trial < 25; ++trial) {
        const Matrix a = random_matrix(rng, 3, 2.0);
        const double t1 = tdist(rng);
        const double t2 = tdist(rng);
        const Matrix lhs = expm(a, t1) * expm(a, t2);
        const Matrix rhs = expm(a, t1 + t2);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("expm determinant matches the trace exponential") {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix a = random_matrix(rng, 3, 2.0);
        const double t = 0.7;
        CHECK(expm(a, t).determinant() ==
              doctest::Approx(std::exp(t * a.trace())).epsilon(1e-8));
    }
}

TEST_CASE("leader trajectory") {
    Vector v0(2);
    v0 << 1.0, 0.0;
    const Exosystem exo = Exosystem::make(rotation_generator(), v0);
    CHECK(exo.warnings.empty());

    SUBCASE("t = 0 returns the initial state") {
        const auto [v, y0] = leader_state(exo, 0.0);
        CHECK((v - v0).norm() == doctest::Approx(0.0));
        CHECK(y0 == doctest::Approx(1.0));
    }
    SUBCASE("quarter period") {
        const auto [v, y0] = leader_state(exo, std::numbers::pi / 2.0);
        CHECK(v(0) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(v(1) == doctest::Approx(-1.0));
        CHECK(y0 == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("full period") {
        const auto [v, y0] = leader_state(exo, 2.0 * std::numbers::pi);
        CHECK(v(0) == doctest::Approx(1.0));
        CHECK(v(1) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(y0 == doctest::Approx(1.0));
    }
    SUBCASE("rotation preserves the norm") {
        for (double t = 0.0; t <= 12.0; t += 0.37) {
            const auto [v, y0] = leader_state(exo, t);
            CHECK(std::abs(v.norm() - 1.0) < 1e-9);
        }
    }
    SUBCASE("negative time is rejected") {
        CHECK_THROWS_AS(leader_state(exo, -0.1), ContractViolation);
    }
}

TEST_CASE("exosystem flags an unstable leader") {
    Matrix s(1, 1);
    s << 0.5;
    Vector v0(1);
    v0 << 1.0;
    const Exosystem exo = Exosystem::make(s, v0);
    REQUIRE(exo.warnings.size() == 1);
    CHECK(exo.warnings[0].find("marginally stable") != std::string::npos);
}

TEST_CASE("exosystem enforces the output selector pattern") {
    Vector v0(2);
    v0 << 1.0, 0.0;
    RowVector bad_f(2);
    bad_f << 0.0, 1.0;
    CHECK_THROWS_AS(Exosystem::make(rotation_generator(), bad_f, v0), ContractViolation);
}

TEST_CASE("spectral norm of known matrices") {
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 3.0;
    d(1, 1) = 1.0;
    CHECK(spectral_norm(d) == doctest::Approx(3.0).epsilon(1e-11));

    Matrix n = Matrix::Zero(2, 2);
    n(0, 1) = 2.0;
    CHECK(spectral_norm(n) == doctest::Approx(2.0).epsilon(1e-11));

    Matrix a(2, 2);
    a << 1.0, 2.0, 3.0, 4.0;
    // Largest singular value of [[1,2],[3,4]] in closed form.
    const double expected = std::sqrt(15.0 + std::sqrt(221.0));
    CHECK(spectral_norm(a) == doctest::Approx(expected).epsilon(1e-11));
}

TEST_CASE("kronecker product layout") {
    Matrix a(2, 2);
    a << 1.0, 2.0, 3.0, 4.0;
    const Matrix k = kron(a, Matrix::Identity(2, 2));
    CHECK(k.rows() == 4);
    CHECK(k(0, 0) == 1.0);
    CHECK(k(0, 2) == 2.0);
    CHECK(k(1, 3) == 2.0);
    CHECK(k(2, 0) == 3.0);
    CHECK(k(3, 3) == 4.0);
    CHECK(k(0, 1) == 0.0);
}
