#include <doctest.h>

#include <random>
#include <stdexcept>

#include "cases.hpp"
#include "lvharvest/classify.hpp"
#include "lvharvest/errors.hpp"

using namespace lvharvest;

TEST_CASE("classify reference cases") {
    const auto rep = classify(testcases::case_i(), HarvestEffort(3.29, 3.26));
    CHECK(rep.regime == Regime::BothPersist);
    REQUIRE(rep.predicted_averages);
    CHECK(std::abs((*rep.predicted_averages)[0] - 0.665) <= 0.003);
    CHECK(std::abs((*rep.predicted_averages)[1] - 0.857) <= 0.003);

    const auto flat = testcases::constant_params(6.5, 6.6, 0.0, 0.0, testcases::seasonal_c());
    CHECK(classify(flat, HarvestEffort(10, 10)).regime == Regime::BothExtinct);

    const auto zero = classify(testcases::case_i(), HarvestEffort(0, 0));
    CHECK(zero.regime == Regime::BothPersist);
    CHECK(zero.margins.b1 == doctest::Approx(6.494975));
    CHECK(zero.margins.delta1 == doctest::Approx(3.5 * 6.494975 - 0.4 * 6.594975));
}

TEST_CASE("classify single-survivor branches") {
    const Matrix2 c{{{1.0, 0.5}, {0.5, 1.0}}};
    // case (II): b1 > 0 > b2
    auto p = testcases::constant_params(2.0, 0.5, 0.0, 0.0, c);
    auto rep = classify(p, HarvestEffort(0.0, 1.0));
    CHECK(rep.regime == Regime::X1PersistsX2Extinct);
    CHECK((*rep.predicted_averages)[0] == doctest::Approx(2.0));
    // case (III)
    rep = classify(p, HarvestEffort(2.5, 0.0));
    CHECK(rep.regime == Regime::X2PersistsX1Extinct);
    CHECK((*rep.predicted_averages)[1] == doctest::Approx(0.5));
    // case (IV)(i): b = (2, 0.5): Delta_1 = 2 - 0.25 > 0, Delta_2 = 0.5 - 1 < 0
    rep = classify(p, HarvestEffort());
    CHECK(rep.regime == Regime::X1PersistsX2Extinct);
    CHECK((*rep.predicted_averages)[0] == doctest::Approx(2.0));
    // case (IV)(ii): mirror
    p = testcases::constant_params(0.5, 2.0, 0.0, 0.0, c);
    rep = classify(p, HarvestEffort());
    CHECK(rep.regime == Regime::X2PersistsX1Extinct);
    CHECK((*rep.predicted_averages)[1] == doctest::Approx(2.0));
}

TEST_CASE("boundaries are Indeterminate") {
    const auto p = testcases::constant_params(5.0, 3.0, 0.0, 0.0, {{{1, 0}, {0, 1}}});
    auto rep = classify(p, HarvestEffort(5.0, 0.0));
    CHECK(rep.regime == Regime::Indeterminate);
    CHECK_FALSE(rep.predicted_averages);
    // Delta_1 = 0 with both b positive
    const auto q = testcases::constant_params(1.0, 1.0, 0.0, 0.0, {{{2.0, 1.0}, {0.5, 1.0}}});
    rep = classify(q, HarvestEffort());
    CHECK(rep.margins.delta1 == 0.0);
    CHECK(rep.regime == Regime::Indeterminate);
}

TEST_CASE("Delta <= 0 is an assumption violation") {
    const auto p = testcases::constant_params(1.0, 1.0, 0.0, 0.0, {{{1.0, 2.0}, {0.5, 1.0}}});
    CHECK_THROWS_AS(classify(p, HarvestEffort()), AssumptionViolation);
    CHECK_FALSE(check_assumptions(p, HarvestEffort()).a1);
    CHECK_THROWS_AS(classify(testcases::case_i(), HarvestEffort(), 0.0), std::invalid_argument);
}

TEST_CASE("check_assumptions") {
    const auto f = check_assumptions(testcases::case_i(), HarvestEffort(3.29, 3.26));
    CHECK(f.a1);
    CHECK(f.h1);
    CHECK(f.h2);
    CHECK(f.a3);
    CHECK_FALSE(check_assumptions(testcases::case_i(), HarvestEffort(10, 10)).h1);
    auto p = testcases::case_i();
    p.c[1][0] = 5.0;
    CHECK_FALSE(check_assumptions(p, HarvestEffort()).a3);
}

TEST_CASE("property: random draws") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int draws = 0;
    while (draws < 1000) {
        const Matrix2 c{{{0.05 + 3 * u(rng), 3 * u(rng)}, {3 * u(rng), 0.05 + 3 * u(rng)}}};
        if (!(determinant(c) > 1e-6)) continue;
        const ModelParams p = testcases::constant_params(0.01 + 5 * u(rng), 0.01 + 5 * u(rng),
                                                         u(rng), u(rng), c);
        const HarvestEffort H(2 * u(rng), 2 * u(rng));
        const PeriodAverages avg = period_averages(p);
        const Vec2 b = b_integrals(avg, H);
        if (!(b[0] > 0 && b[1] > 0)) continue;
        ++draws;
        const Deltas d = deltas(c, b);
        // both deltas negative is impossible under these hypotheses
        CHECK_FALSE((d.delta1 < 0.0 && d.delta2 < 0.0));

        const RegimeReport loose = classify(p, H, 1e-6);
        const RegimeReport tight = classify(p, H, 1e-12);
        if (loose.regime != Regime::Indeterminate) CHECK(tight.regime == loose.regime);
        if (loose.regime == Regime::BothPersist) {
            CHECK((*loose.predicted_averages)[0] > 0.0);
            CHECK((*loose.predicted_averages)[1] > 0.0);
        }
        // raising efforts by delta lowers b by exactly delta
        const double dh = u(rng);
        const Vec2 b2 = b_integrals(avg, HarvestEffort(H[0] + dh, H[1] + dh));
        CHECK(b2[0] == doctest::Approx(b[0] - dh).epsilon(1e-14));
        CHECK(b2[1] == doctest::Approx(b[1] - dh).epsilon(1e-14));
    }
}
