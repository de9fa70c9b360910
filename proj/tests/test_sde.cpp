#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "cases.hpp"
#include "lvharvest/errors.hpp"
#include "lvharvest/sde.hpp"

using namespace lvharvest;

namespace {

ModelParams logistic() { return testcases::constant_params(2.0, 2.0, 0.0, 0.0, {{{1, 0}, {0, 1}}}); }

SimConfig short_cfg(Scheme scheme, double t_end = 20.0) {
    SimConfig cfg;
    cfg.t_end = t_end;
    cfg.x0 = {0.5, 0.5};
    cfg.seed = 42;
    cfg.scheme = scheme;
    return cfg;
}

}  // namespace

TEST_CASE("config validation") {
    SimConfig cfg;
    cfg.dt = 0.0;
    CHECK_THROWS_AS(validate(cfg), InvalidConfig);
    cfg = SimConfig{};
    cfg.x0 = {0.0, 1.0};
    CHECK_THROWS_AS(simulate(testcases::case_i(), HarvestEffort(), cfg), InvalidConfig);
    cfg.scheme = Scheme::DirectEM;
    CHECK_NOTHROW(validate(cfg));
    cfg.x0 = {-1.0, 1.0};
    CHECK_THROWS_AS(validate(cfg), InvalidConfig);
    cfg = SimConfig{};
    cfg.dt = 1.5;
    CHECK_THROWS_AS(validate(cfg), InvalidConfig);

    SimConfig s;
    s.dt = 1e-3;
    s.t_end = 200.0;
    CHECK(step_count(s) == 200000);
    CHECK(effective_stride(s) == 2);
    s.t_end = 0.01234;
    CHECK(step_count(s) == 12);
}

TEST_CASE("deterministic logistic equilibrium") {
    for (Scheme scheme : {Scheme::LogEM, Scheme::DirectEM}) {
        const Trajectory tr = simulate(logistic(), HarvestEffort(), short_cfg(scheme));
        CHECK(tr.times.back() == doctest::Approx(20.0));
        CHECK(std::abs(tr.states.back()[0] - 2.0) < 1e-3);
        CHECK(std::abs(tr.states.back()[1] - 2.0) < 1e-3);
        const Vec2 avg = time_average(tr, 0.5);
        CHECK(std::abs(avg[0] - 2.0) < 1e-3);
        CHECK(std::abs(avg[1] - 2.0) < 1e-3);
        const Vec2 slope = log_growth_rate(tr);
        CHECK(std::abs(slope[0]) < 1e-6);
        CHECK(std::abs(slope[1]) < 1e-6);
    }
}

TEST_CASE("seeded runs repeat bit for bit") {
    const auto p = testcases::case_i();
    SimConfig cfg = short_cfg(Scheme::LogEM, 5.0);
    const Trajectory a = simulate(p, HarvestEffort(3.29, 3.26), cfg);
    const Trajectory b = simulate(p, HarvestEffort(3.29, 3.26), cfg);
    CHECK(a.states == b.states);
    CHECK(a.times == b.times);
    std::ostringstream sa, sb;
    write_csv(sa, a);
    write_csv(sb, b);
    CHECK(sa.str() == sb.str());
    cfg.seed = 43;
    const Trajectory c = simulate(p, HarvestEffort(3.29, 3.26), cfg);
    CHECK(c.states != a.states);
}

TEST_CASE("trajectory recording and CSV") {
    SimConfig cfg = short_cfg(Scheme::LogEM, 1.0);
    cfg.record_stride = 300;
    const Trajectory tr = simulate(testcases::case_i(), HarvestEffort(), cfg);
    // steps 0, 300, 600, 900 and the final step 1000
    REQUIRE(tr.times.size() == 5);
    CHECK(tr.times[3] == doctest::Approx(0.9));
    CHECK(tr.times[4] == doctest::Approx(1.0));
    for (std::size_t k = 1; k < tr.times.size(); ++k) CHECK(tr.times[k] > tr.times[k - 1]);
    std::ostringstream os;
    write_csv(os, tr);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "t,x1,x2");
    std::getline(is, line);
    CHECK(line == "0,0.5,0.5");
    std::getline(is, line);
    // 17 significant digits round-trip the stored double
    const double x1 = std::stod(line.substr(line.find(',') + 1));
    CHECK(x1 == tr.states[1][0]);
}

TEST_CASE("time_average and log_growth_rate on hand-built trajectories") {
    Trajectory tr;
    for (int k = 0; k <= 10; ++k) {
        tr.times.push_back(k * 0.1);
        tr.states.push_back({1.0, 2.0});
    }
    tr.floor = 1e-12;
    const Vec2 avg = time_average(tr, 0.0);
    CHECK(avg[0] == doctest::Approx(1.0));
    CHECK(avg[1] == doctest::Approx(2.0));
    CHECK_THROWS_AS(time_average(tr, 0.95), EmptyWindow);
    CHECK_THROWS_AS(time_average(tr, 1.0), std::invalid_argument);

    Trajectory exp_path;
    for (int k = 0; k <= 100; ++k) {
        const double t = k * 0.1;
        exp_path.times.push_back(t);
        exp_path.states.push_back({std::exp(-2.0 * t), std::exp(0.5 * t)});
    }
    const Vec2 slope = log_growth_rate(exp_path);
    CHECK(slope[0] == doctest::Approx(-2.0));
    CHECK(slope[1] == doctest::Approx(0.5));

    exp_path.floor = 1e-12;
    exp_path.states.back()[0] = 1e-12;
    CHECK_THROWS_AS(log_growth_rate(exp_path), DegenerateInput);
}

TEST_CASE("extinction and persistence signatures") {
    const auto p = testcases::case_i();
    SimConfig cfg;
    cfg.t_end = 50.0;
    cfg.seed = 9;
    const Vec2 ext = log_growth_rate(simulate(p, HarvestEffort(10, 10), cfg));
    CHECK(ext[0] < -1.0);
    CHECK(ext[1] < -1.0);
    // theory: slope ~ b-integral = (-3.505, -3.405)
    CHECK(ext[0] == doctest::Approx(-3.505).epsilon(0.05));

    cfg.t_end = 100.0;
    const Vec2 per = log_growth_rate(simulate(p, HarvestEffort(3.29, 3.26), cfg));
    CHECK(std::abs(per[0]) < 0.1);
    CHECK(std::abs(per[1]) < 0.1);
}

TEST_CASE("long single path time average near the ergodic limit") {
    SimConfig cfg;
    cfg.t_end = 500.0;
    cfg.seed = 1234;
    const Trajectory tr = simulate(testcases::case_i(), HarvestEffort(3.29, 3.26), cfg);
    const Vec2 avg = time_average(tr, 0.5);
    // limits Delta_i / Delta at H = (3.29, 3.26)
    CHECK(std::abs(avg[0] / 0.665 - 1.0) < 0.10);
    CHECK(std::abs(avg[1] / 0.857 - 1.0) < 0.10);
}

TEST_CASE("LogEM stays positive even when an extinct species underflows") {
    SimConfig cfg;
    cfg.t_end = 300.0;
    cfg.seed = 5;
    const Trajectory tr = simulate(testcases::case_i(), HarvestEffort(10, 10), cfg);
    for (const auto& x : tr.states) {
        CHECK(x[0] > 0.0);
        CHECK(x[1] > 0.0);
    }
    // ln x keeps decreasing linearly even past the double range
    CHECK(tr.log_states.back()[0] < -900.0);
    CHECK(log_growth_rate(tr)[0] < -3.0);
}

TEST_CASE("DirectEM: zero is absorbing and the floor clamps") {
    const auto p = testcases::case_i();
    SimConfig cfg;
    cfg.scheme = Scheme::DirectEM;
    cfg.x0 = {0.0, 0.5};
    cfg.t_end = 10.0;
    cfg.record_stride = 1;
    const Trajectory tr = simulate(p, HarvestEffort(), cfg);
    for (const auto& x : tr.states) CHECK(x[0] == 0.0);
    CHECK(tr.log_states.empty());

    // huge noise pushes the direct scheme below zero; the floor keeps it at 1e-12
    ModelParams loud = p;
    loud.alpha = {PeriodicFn::constant(40.0), PeriodicFn::constant(0.0)};
    cfg.x0 = {0.5, 0.5};
    cfg.dt = 0.01;
    const Trajectory clamped = simulate(loud, HarvestEffort(), cfg);
    bool hit_floor = false;
    for (const auto& x : clamped.states) {
        CHECK(x[0] >= 1e-12);
        hit_floor = hit_floor || x[0] == 1e-12;
    }
    CHECK(hit_floor);
    CHECK_THROWS_AS(log_growth_rate(clamped), DegenerateInput);
}

TEST_CASE("NonFinite reports the step") {
    ModelParams p = testcases::case_i();
    p.r = {PeriodicFn::constant(1e308), PeriodicFn::constant(1.0)};
    SimConfig cfg;
    cfg.scheme = Scheme::DirectEM;
    cfg.t_end = 1.0;
    try {
        simulate(p, HarvestEffort(), cfg);
        FAIL("expected NonFinite");
    } catch (const NonFinite& e) {
        CHECK(e.step() >= 1);
    }
}

TEST_CASE("property: symmetric noise-free system stays symmetric") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double r = u(rng), a = u(rng), b = 0.5 * a * u(rng) / 3.0, h = 0.05 * u(rng);
        ModelParams p;
        p.r = {testcases::sin_fn(r, 0.1), testcases::sin_fn(r, 0.1)};
        p.alpha = {PeriodicFn::constant(0.0), PeriodicFn::constant(0.0)};
        p.c = {{{a, b}, {b, a}}};
        for (Scheme scheme : {Scheme::LogEM, Scheme::DirectEM}) {
            SimConfig cfg;
            cfg.t_end = 5.0;
            cfg.scheme = scheme;
            cfg.x0 = {0.3, 0.3};
            cfg.record_stride = 1;
            const Trajectory tr = simulate(p, HarvestEffort(h, h), cfg);
            for (const auto& x : tr.states) CHECK(std::abs(x[0] - x[1]) <= 1e-12);
        }
    }
}

TEST_CASE("property: LogEM positivity over random parameters") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        ModelParams p;
        p.r = {testcases::sin_fn(8 * u(rng), u(rng)), testcases::sin_fn(8 * u(rng), u(rng))};
        p.alpha = {testcases::cos_fn(2 * u(rng), 0.1), testcases::cos_fn(2 * u(rng), 0.1)};
        p.c = {{{0.1 + 4 * u(rng), u(rng)}, {u(rng), 0.1 + 4 * u(rng)}}};
        SimConfig cfg;
        cfg.t_end = 20.0;
        cfg.seed = rng();
        cfg.record_stride = 1;
        const Trajectory tr = simulate(p, HarvestEffort(4 * u(rng), 4 * u(rng)), cfg);
        bool positive = true;
        for (const auto& x : tr.states) positive = positive && x[0] > 0.0 && x[1] > 0.0;
        CHECK(positive);
    }
}

TEST_CASE("property: halving dt on a Brownian-refined path moves the time average by O(dt)") {
    const auto p = testcases::case_i();
    const HarvestEffort H(3.29, 3.26);
    const double dt = 1e-3;
    SimConfig fine;
    fine.dt = dt / 2;
    fine.t_end = 50.0;
    SimConfig coarse = fine;
    coarse.dt = dt;
    const std::size_t n_coarse = step_count(coarse);

    std::mt19937_64 rng(2718);
    std::normal_distribution<double> z;
    std::vector<double> f1(2 * n_coarse), f2(2 * n_coarse), c1(n_coarse), c2(n_coarse);
    const double s = std::sqrt(dt / 2);
    for (std::size_t k = 0; k < 2 * n_coarse; ++k) {
        f1[k] = s * z(rng);
        f2[k] = s * z(rng);
    }
    for (std::size_t k = 0; k < n_coarse; ++k) {
        c1[k] = f1[2 * k] + f1[2 * k + 1];
        c2[k] = f2[2 * k] + f2[2 * k + 1];
    }
    const Vec2 a = time_average(simulate_driven(p, H, coarse, c1, c2), 0.5);
    const Vec2 b = time_average(simulate_driven(p, H, fine, f1, f2), 0.5);
    for (std::size_t i = 0; i < 2; ++i) CHECK(std::abs(a[i] - b[i]) < 5.0 * dt * std::abs(b[i]));

    CHECK_THROWS_AS(simulate_driven(p, H, coarse, f1, f2), InvalidConfig);
}

TEST_CASE("seed splitting") {
    CHECK(mix64(0) == 0);
    CHECK(split_seed(1, 0) != split_seed(1, 1));
    CHECK(split_seed(1, 0) != split_seed(2, 0));
    // reference splitmix64 output for state 0 after one increment
    CHECK(split_seed(0, 0) == 0xE220A8397B1DCDAFULL);
}
