#include <doctest.h>

#include <cmath>

#include "petcor/errors.hpp"
#include "petcor/petfilter.hpp"

using namespace petcor;

namespace {

RowVector f_row(int nv) {
    RowVector f = RowVector::Zero(nv);
    f(0) = 1.0;
    return f;
}

FollowerPlant paper_plant() {
    FollowerPlant p;
    p.order = 1;
    p.f = Nonlinearity::paper();
    p.delay = 0.15;
    p.ell = 1.1;
    p.x0 = Vector::Zero(1);
    return p;
}

FilterParams params() {
    FilterParams fp;
    fp.l = -5.0;
    fp.cal_t = 0.01;
    fp.delta_phi = 0.5;
    fp.gamma_phi = 0.8;
    return fp;
}

}  // namespace

TEST_CASE("sensor measurement") {
    Vector snap(2);
    snap << 0.5, 1.0;
    const BroadcastRecord rec{0.0, Matrix::Zero(2, 2), snap};

    CHECK(measure_phi(0.5, rec, f_row(2), 3.0) == doctest::Approx(0.0));
    const BroadcastRecord zero_rec{0.0, Matrix::Zero(2, 2), Vector::Zero(2)};
    CHECK(measure_phi(1.7, zero_rec, f_row(2), 3.0) == doctest::Approx(1.7));
    CHECK(measure_phi(2.0, rec, f_row(2), 3.0) == doctest::Approx(1.5));
}

TEST_CASE("filter dynamics") {
    const FollowerPlant plant = paper_plant();
    ControllerConfig cfg;
    cfg.k = RowVector::Constant(1, -5.0);
    cfg.d_hat = 0.15;
    cfg.nx = 16;
    cfg.ell = 1.1;
    const FilterParams fp = params();

    InputHistory hist(1.0);
    for (double t = 0.0; t <= 1.001; t += 0.01) hist.append(t, 0.0);

    SUBCASE("perfect holds with no drift or input") {
        FollowerPlant zero = plant;
        zero.f = Nonlinearity::zero();
        FilterState fs{0.0, 1.0, 0.0, 0.0, 1.0};
        CHECK(filter_rhs(fs, Vector::Zero(2), Matrix::Zero(2, 2), hist, zero, cfg, fp, 1.0) ==
              doctest::Approx(0.0));
    }
    SUBCASE("correction pushes toward the measurement") {
        FollowerPlant zero = plant;
        zero.f = Nonlinearity::zero();
        FilterState fs{0.0, 1.0, 0.0, 0.1, 1.0};  // phi hold exceeds the state hold by 0.1
        CHECK(filter_rhs(fs, Vector::Zero(2), Matrix::Zero(2, 2), hist, zero, cfg, fp, 1.0) ==
              doctest::Approx(0.5));
    }
    SUBCASE("drift term follows the shifted nonlinearity") {
        FilterState fs{1.0, 1.0, 0.5, 0.5, 1.0};  // equal holds cancel the correction
        CHECK(filter_rhs(fs, Vector::Zero(2), Matrix::Zero(2, 2), hist, plant, cfg, fp, 1.0) ==
              doctest::Approx(1.0 + 0.1 * std::sin(1.0)));
    }
    SUBCASE("only first-order plants are supported") {
        FollowerPlant second = plant;
        second.order = 2;
        second.x0 = Vector::Zero(2);
        FilterState fs{};
        CHECK_THROWS_AS(filter_rhs(fs, Vector::Zero(2), Matrix::Zero(2, 2), hist, second, cfg,
                                   fp, 1.0),
                        ContractViolation);
    }
}

TEST_CASE("sensor trigger") {
    const FilterParams fp = params();

    SUBCASE("unchanged measurement does not fire") {
        FilterState fs{0.0, 0.0, 0.0, 0.42, 0.0};
        const SensorTrigger st = trigger_check_sensor(0.42, fs, fp, 0.01);
        CHECK_FALSE(st.fire);
        CHECK(st.deviation == doctest::Approx(0.0));
    }
    SUBCASE("large jump fires") {
        FilterState fs{0.0, 0.0, 0.0, 0.0, 0.0};
        const SensorTrigger st = trigger_check_sensor(2.0 * fp.delta_phi, fs, fp, 0.0);
        CHECK(st.fire);
        CHECK(st.threshold == doctest::Approx(fp.delta_phi));
    }
    SUBCASE("equality with the threshold does not fire") {
        FilterState fs{0.0, 0.0, 0.0, 0.0, 0.0};
        const SensorTrigger st = trigger_check_sensor(fp.delta_phi, fs, fp, 0.0);
        CHECK(st.deviation == doctest::Approx(st.threshold));
        CHECK_FALSE(st.fire);
    }
    SUBCASE("off-grid instants fault") {
        FilterState fs{};
        CHECK_THROWS_AS(trigger_check_sensor(0.0, fs, fp, 0.0137), SchedulingFault);
    }
}

TEST_CASE("filter params validation") {
    FilterParams fp = params();
    CHECK_NOTHROW(fp.validate());
    fp.cal_t = 0.0;
    CHECK_THROWS_AS(fp.validate(), ContractViolation);
    fp = params();
    fp.delta_phi = -1.0;
    CHECK_THROWS_AS(fp.validate(), ContractViolation);
}
