#include <doctest.h>

#include <cmath>

#include "petcor/errors.hpp"
#include "petcor/history.hpp"
#include "petcor/plant.hpp"

using namespace petcor;

TEST_CASE("input history interpolation") {
    InputHistory hist(1.0);
    hist.append(0.0, 0.0);
    hist.append(0.001, 1.0);

    CHECK(hist.value_at(0.0) == 0.0);
    CHECK(hist.value_at(0.001) == 1.0);
    CHECK(hist.value_at(0.0005) == doctest::Approx(0.5));
    CHECK(hist.value_at(-3.0) == 0.0);  // before the run start
}

TEST_CASE("input history faults") {
    InputHistory hist(0.5);
    hist.append(0.0, 1.0);
    CHECK_THROWS_AS(hist.value_at(0.2), SimulationFault);  // past the newest sample
    CHECK_THROWS_AS(hist.append(0.0, 2.0), ContractViolation);

    for (double t = 0.1; t <= 2.05; t += 0.1) hist.append(t, t);
    CHECK_THROWS_AS(hist.value_at(0.3), SimulationFault);  // older than the window
    CHECK(hist.value_at(1.8) == doctest::Approx(1.8));
}

TEST_CASE("input history holds the newest value within the slack") {
    InputHistory hist(1.0, 0.001);
    hist.append(0.0, 0.0);
    hist.append(0.01, 4.0);
    CHECK(hist.value_at(0.0105) == 4.0);
    CHECK_THROWS_AS(hist.value_at(0.013), SimulationFault);
}

TEST_CASE("delayed input") {
    InputHistory hist(1.0);
    hist.append(0.0, 2.5);
    hist.append(0.1, 2.5);
    CHECK(delayed_input(hist, 0.1, 0.05) == doctest::Approx(2.5));  // constant history
    CHECK(delayed_input(hist, 0.05, 0.2) == 0.0);                   // reaches before t=0
}

TEST_CASE("nonlinearity catalog") {
    const Nonlinearity paper = Nonlinearity::paper();
    CHECK(paper.eval(0.0) == 0.0);
    CHECK(paper.eval(1.0) == doctest::Approx(1.0 + 0.1 * std::sin(1.0)));
    CHECK(paper.deriv(0.0) == doctest::Approx(1.1));

    const Nonlinearity robust = Nonlinearity::robust();
    CHECK(robust.eval(0.0) == 0.0);
    CHECK_FALSE(robust.lipschitz_claimed());

    CHECK(Nonlinearity::linear(-2.0).eval(3.0) == doctest::Approx(-6.0));
    CHECK(Nonlinearity::zero().eval(5.0) == 0.0);
    CHECK_THROWS_AS(Nonlinearity::from_name("cubic"), ContractViolation);

    SUBCASE("derivatives match finite differences") {
        for (const Nonlinearity& f :
             {paper, robust, Nonlinearity::linear(0.7), Nonlinearity::zero()}) {
            for (double x = -3.0; x <= 3.0; x += 0.37) {
                const double fd = (f.eval(x + 1e-6) - f.eval(x - 1e-6)) / 2e-6;
                CHECK(f.deriv(x) == doctest::Approx(fd).epsilon(1e-5));
            }
        }
    }
}

TEST_CASE("slope bound audit for claimed catalog entries") {
    for (const Nonlinearity& f :
         {Nonlinearity::paper(), Nonlinearity::linear(-2.0), Nonlinearity::zero()}) {
        REQUIRE(f.lipschitz_claimed());
        const double ell = f.lipschitz();
        for (int k = 0; k <= 20000; ++k) {
            const double x = -10.0 + 20.0 * k / 20000.0;
            CHECK(std::abs(f.deriv(x)) <= ell + 1e-9);
        }
    }
}

TEST_CASE("plant dynamics") {
    FollowerPlant p;
    p.order = 1;
    p.delay = 0.15;
    p.ell = 1.1;
    p.f = Nonlinearity::paper();
    p.x0 = Vector::Zero(1);

    Vector x(1);
    SUBCASE("zero everything") {
        p.f = Nonlinearity::zero();
        x << 0.0;
        CHECK(plant_rhs(p, x, 0.0, 0.0)(0) == 0.0);
    }
    SUBCASE("zero state with unit input") {
        x << 0.0;
        CHECK(plant_rhs(p, x, 1.0, 0.0)(0) == doctest::Approx(1.0));
    }
    SUBCASE("arithmetic") {
        x << 1.0;
        CHECK(plant_rhs(p, x, -3.08415, 0.0)(0) ==
              doctest::Approx(1.0 + 0.1 * std::sin(1.0) - 3.08415));
    }
    SUBCASE("disturbance is additive on the driven channel") {
        p.disturbance = {0.1, 0.1};
        x << 0.0;
        const double t = 0.8;
        CHECK(plant_rhs(p, x, 0.0, t)(0) ==
              doctest::Approx(0.1 * std::sin(t) + 0.1 * std::cos(t)));
    }
}

TEST_CASE("chain and strict-feedback forms") {
    FollowerPlant chain;
    chain.order = 2;
    chain.delay = 0.1;
    chain.f = Nonlinearity::paper();
    chain.x0 = Vector::Zero(2);
    Vector x(2);
    x << 0.5, -2.0;
    const Vector dx = plant_rhs(chain, x, 3.0, 0.0);
    CHECK(dx(0) == doctest::Approx(-2.0));
    CHECK(dx(1) == doctest::Approx(chain.f.eval(0.5) + 3.0));

    FollowerPlant sf = chain;
    sf.strict_feedback = {Nonlinearity::linear(2.0)};
    const Vector dsf = plant_rhs(sf, x, 3.0, 0.0);
    CHECK(dsf(0) == doctest::Approx(-2.0 + 2.0 * 0.5));
    CHECK(dsf(1) == doctest::Approx(sf.f.eval(-2.0) + 3.0));  // top channel reads its own state
}

TEST_CASE("plant validation") {
    FollowerPlant p;
    p.order = 1;
    p.delay = 0.0;
    p.f = Nonlinearity::paper();
    p.x0 = Vector::Zero(1);
    CHECK_THROWS_AS(p.validate(), ContractViolation);

    p.delay = 0.1;
    p.x0 = Vector::Zero(2);
    CHECK_THROWS_AS(p.validate(), ContractViolation);

    p.x0 = Vector::Zero(1);
    p.ell = 1.1;
    std::vector<std::string> warnings;
    p.validate(&warnings);
    CHECK(warnings.empty());

    p.f = Nonlinearity::robust();
    p.ell = 2.5;
    p.validate(&warnings);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("operating-range") != std::string::npos);
}
