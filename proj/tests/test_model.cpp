#include <doctest.h>

#include <random>

#include "cases.hpp"
#include "lvharvest/errors.hpp"
#include "lvharvest/model.hpp"

using namespace lvharvest;

TEST_CASE("validation of parameters and efforts") {
    auto p = testcases::case_i();
    CHECK_NOTHROW(validate(p));
    p.c[0][0] = -1.0;
    CHECK_THROWS_WITH_AS(validate(p), "c11 must be > 0", ValidationError);
    p = testcases::case_i();
    p.c[1][0] = -0.1;
    CHECK_THROWS_AS(validate(p), ValidationError);
    CHECK_THROWS_AS(HarvestEffort(-0.1, 0.0), ValidationError);
    CHECK_NOTHROW(HarvestEffort(0.0, 0.0));
}

TEST_CASE("b_integral") {
    const auto p = testcases::case_i();
    const HarvestEffort H(3.29, 3.26);
    // reported 3.20 and 3.33 (2 decimals)
    CHECK(std::abs(b_integral(p, H, 0) - 3.20) <= 0.01);
    CHECK(std::abs(b_integral(p, H, 1) - 3.33) <= 0.01);

    const auto q = testcases::constant_params(5.0, 1.0, 0.0, 0.0, {{{1, 0}, {0, 1}}});
    CHECK(b_integral(q, HarvestEffort(5.0, 0.0), 0) == 0.0);
}

TEST_CASE("deltas") {
    const auto p = testcases::case_i();
    const Deltas d = deltas(p, HarvestEffort(3.29, 3.26));
    CHECK(d.delta == doctest::Approx(14.85).epsilon(1e-14));
    CHECK(std::abs(d.delta1 - 9.88) <= 0.02);
    CHECK(std::abs(d.delta2 - 12.72) <= 0.02);

    const Deltas e = deltas(Matrix2{{{1, 0}, {0, 1}}}, Vec2{0.0, 0.0});
    CHECK(e.delta == 1.0);
    CHECK(e.delta1 == 0.0);
    CHECK(e.delta2 == 0.0);
}

TEST_CASE("phi") {
    CHECK(std::abs(phi(testcases::case_i(), HarvestEffort(3.29, 3.26), 0) - 2.71) <= 0.02);
    CHECK(std::abs(phi(testcases::case_i(), HarvestEffort(3.29, 3.26), 1) - 2.69) <= 0.02);
    CHECK(std::abs(phi(testcases::case_iii(), HarvestEffort(3.29, 2.96), 1) - 2.08) <= 0.02);

    // hand evaluation at H = 0, constant coefficients: b = (2, 3),
    // Phi_1 = 5 - (2 + 1 + 0.5)^2 / 4, Phi_2 = 5 - (3 + 2 + 0.25)^2 / 8
    const auto q = testcases::constant_params(2.0, 3.0, 0.0, 0.0, {{{1.0, 0.25}, {0.5, 2.0}}});
    CHECK(phi(q, HarvestEffort(), 0) == doctest::Approx(5.0 - 3.5 * 3.5 / 4.0));
    CHECK(phi(q, HarvestEffort(), 1) == doctest::Approx(5.0 - 5.25 * 5.25 / 8.0));
}

TEST_CASE("L vector") {
    const Vec2 L1 = L_vector(testcases::case_i());
    CHECK(L1[0] == doctest::Approx(6.5 - 0.01005 / 2).epsilon(1e-14));
    CHECK(L1[1] == doctest::Approx(6.6 - 0.01005 / 2).epsilon(1e-14));
    const Vec2 L2 = L_vector(testcases::case_ii());
    CHECK(L2[0] == doctest::Approx(6.5 - 0.49005 / 2).epsilon(1e-14));
    CHECK(L2[1] == doctest::Approx(6.594975).epsilon(1e-14));
    const Vec2 L3 = L_vector(testcases::constant_params(2.0, 3.0, 0.0, 0.0, {{{1, 0}, {0, 1}}}));
    CHECK(L3[0] == 2.0);
    CHECK(L3[1] == 3.0);
}

TEST_CASE("drift and diffusion") {
    const auto p = testcases::case_i();
    auto z = drift_diffusion(p, HarvestEffort(1, 1), {0.0, 0.0}, 0.3);
    CHECK(z.drift == Vec2{0.0, 0.0});
    CHECK(z.diffusion == Vec2{0.0, 0.0});

    const auto q = testcases::constant_params(2.0, 2.0, 0.0, 0.0, {{{1, 0}, {0, 1}}});
    z = drift_diffusion(q, HarvestEffort(), {2.0, 2.0}, 0.0);
    // identity C: 2 * (2 - 1*2 - 0*2) = 0, the logistic equilibrium
    CHECK(z.drift == Vec2{0.0, 0.0});
    CHECK(z.diffusion == Vec2{0.0, 0.0});
    // all-ones C: 2 * (2 - 2 - 2) = -4
    const auto ones = testcases::constant_params(2.0, 2.0, 0.0, 0.0, {{{1, 1}, {1, 1}}});
    z = drift_diffusion(ones, HarvestEffort(), {2.0, 2.0}, 0.0);
    CHECK(z.drift == Vec2{-4.0, -4.0});

    z = drift_diffusion(p, HarvestEffort(), {1.0, 1.0}, 0.25);
    CHECK(z.drift[0] == doctest::Approx(1.9).epsilon(1e-13));
    CHECK(z.drift[1] == doctest::Approx(2.7).epsilon(1e-13));
    CHECK(z.diffusion[0] == doctest::Approx(0.1).epsilon(1e-13));
}

TEST_CASE("property: L - h equals the b-integral; deltas are linear in b") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        ModelParams p;
        p.r = {testcases::sin_fn(10 * u(rng), u(rng)), testcases::cos_fn(10 * u(rng), u(rng))};
        p.alpha = {testcases::cos_fn(u(rng), 0.1 * u(rng)), testcases::sin_fn(u(rng), 0.1 * u(rng))};
        p.c = {{{0.1 + u(rng), u(rng)}, {u(rng), 0.1 + u(rng)}}};
        const HarvestEffort H(5 * u(rng), 5 * u(rng));
        const Vec2 L = L_vector(p);
        CHECK(std::abs((L[0] - H[0]) - b_integral(p, H, 0)) < 1e-12);
        CHECK(std::abs((L[1] - H[1]) - b_integral(p, H, 1)) < 1e-12);

        // shifting both r_i by s shifts b by s: Delta_1 by (c22 - c12) s, Delta_2 by (c11 - c21) s
        const double s = u(rng);
        ModelParams q = p;
        q.r = {PeriodicFn::harmonic(p.r[0].constant_term() + s, p.r[0].harmonics()),
               PeriodicFn::harmonic(p.r[1].constant_term() + s, p.r[1].harmonics())};
        const Deltas a = deltas(p, H), b = deltas(q, H);
        CHECK(b.delta == a.delta);
        CHECK(b.delta1 - a.delta1 == doctest::Approx((p.c[1][1] - p.c[0][1]) * s).epsilon(1e-9));
        CHECK(b.delta2 - a.delta2 == doctest::Approx((p.c[0][0] - p.c[1][0]) * s).epsilon(1e-9));

        // extinct components stay extinct
        const auto dd = drift_diffusion(p, H, {0.0, u(rng)}, u(rng));
        CHECK(dd.drift[0] == 0.0);
        CHECK(dd.diffusion[0] == 0.0);
    }
}
