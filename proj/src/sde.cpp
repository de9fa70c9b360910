#include "lvharvest/sde.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

#include "lvharvest/detail/stepper.hpp"
#include "lvharvest/errors.hpp"

namespace lvharvest {

std::string_view to_string(Scheme s) { return s == Scheme::LogEM ? "LogEM" : "DirectEM"; }

Scheme scheme_from_string(std::string_view s) {
    if (s == "LogEM") return Scheme::LogEM;
    if (s == "DirectEM") return Scheme::DirectEM;
    throw InvalidConfig("unknown scheme '" + std::string(s) + "' (expected LogEM or DirectEM)");
}

void validate(const SimConfig& cfg) {
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw InvalidConfig("dt must be > 0");
    if (!(cfg.dt < 1.0)) throw InvalidConfig("dt must be < 1");
    if (!(cfg.t_end > 0.0) || !std::isfinite(cfg.t_end)) throw InvalidConfig("t_end must be > 0");
    if (!(cfg.floor >= 0.0)) throw InvalidConfig("floor must be >= 0");
    for (std::size_t i = 0; i < 2; ++i) {
        const double v = cfg.x0[i];
        if (!std::isfinite(v)) throw InvalidConfig("x0 must be finite");
        if (cfg.scheme == Scheme::LogEM && !(v > 0.0))
            throw InvalidConfig("x0 components must be > 0 for LogEM");
        if (cfg.scheme == Scheme::DirectEM && !(v >= 0.0))
            throw InvalidConfig("x0 components must be >= 0");
    }
    if (cfg.scheme == Scheme::DirectEM && !(cfg.x0[0] > 0.0 || cfg.x0[1] > 0.0))
        throw InvalidConfig("x0 must have a positive component");
}

std::size_t step_count(const SimConfig& cfg) {
    const double n = std::round(cfg.t_end / cfg.dt);
    return n < 1.0 ? 1 : static_cast<std::size_t>(n);
}

std::size_t effective_stride(const SimConfig& cfg) {
    if (cfg.record_stride > 0) return cfg.record_stride;
    const std::size_t steps = step_count(cfg);
    const std::size_t max_intervals = kMaxRecordedPoints - 1;
    return std::max<std::size_t>(1, (steps + max_intervals - 1) / max_intervals);
}

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t split_seed(std::uint64_t parent, std::uint64_t k) {
    return mix64(parent + (k + 1) * 0x9E3779B97F4A7C15ULL);
}

namespace {

template <class Noise>
Trajectory run(const ModelParams& params, const HarvestEffort& H, const SimConfig& cfg,
               Noise&& noise) {
    const std::size_t steps = step_count(cfg);
    const std::size_t stride = effective_stride(cfg);
    const bool log_scheme = cfg.scheme == Scheme::LogEM;

    Trajectory traj;
    traj.seed = cfg.seed;
    traj.scheme = cfg.scheme;
    traj.dt = cfg.dt;
    traj.floor = cfg.floor;
    const std::size_t n_rec = steps / stride + 2;
    traj.times.reserve(n_rec);
    traj.states.reserve(n_rec);
    if (log_scheme) traj.log_states.reserve(n_rec);

    detail::CoefficientSchedule coeffs(params, H, cfg.dt);
    detail::integrate(params, coeffs, cfg, steps, noise,
                      [&](std::size_t k, const Vec2& x, const Vec2& lnx) {
                          if (k % stride != 0 && k != steps) return;
                          traj.times.push_back(static_cast<double>(k) * cfg.dt);
                          traj.states.push_back(x);
                          if (log_scheme) traj.log_states.push_back(lnx);
                      });
    return traj;
}

}  // namespace

Trajectory simulate(const ModelParams& params, const HarvestEffort& H, const SimConfig& cfg) {
    validate(params);
    validate(cfg);
    return run(params, H, cfg, detail::GaussianNoise(cfg.seed, cfg.dt));
}

Trajectory simulate_driven(const ModelParams& params, const HarvestEffort& H,
                           const SimConfig& cfg, std::span<const double> dW1,
                           std::span<const double> dW2) {
    validate(params);
    validate(cfg);
    const std::size_t steps = step_count(cfg);
    if (dW1.size() != steps || dW2.size() != steps)
        throw InvalidConfig("need one Brownian increment per step and species (" +
                            std::to_string(steps) + ")");
    return run(params, H, cfg, [&](std::size_t k) { return Vec2{dW1[k], dW2[k]}; });
}

namespace {

// index of the first recorded point with t >= t_start
std::size_t window_start(const Trajectory& traj, double t_start) {
    const auto it = std::lower_bound(traj.times.begin(), traj.times.end(), t_start);
    return static_cast<std::size_t>(it - traj.times.begin());
}

}  // namespace

Vec2 time_average(const Trajectory& traj, double burn_in_fraction) {
    if (!(burn_in_fraction >= 0.0 && burn_in_fraction < 1.0))
        throw std::invalid_argument("burn_in_fraction must lie in [0,1)");
    if (traj.times.size() < 2) throw EmptyWindow("trajectory has fewer than 2 points");
    const double t0 = traj.times.front();
    const double t1 = traj.times.back();
    const std::size_t first = window_start(traj, t0 + burn_in_fraction * (t1 - t0));
    if (traj.times.size() - first < 2) throw EmptyWindow("burn-in leaves fewer than 2 points");

    Vec2 area{0.0, 0.0};
    for (std::size_t k = first + 1; k < traj.times.size(); ++k) {
        const double w = 0.5 * (traj.times[k] - traj.times[k - 1]);
        for (std::size_t i = 0; i < 2; ++i) area[i] += w * (traj.states[k][i] + traj.states[k - 1][i]);
    }
    const double span = traj.times.back() - traj.times[first];
    return {area[0] / span, area[1] / span};
}

Vec2 log_growth_rate(const Trajectory& traj) {
    if (traj.times.size() < 2) throw EmptyWindow("trajectory has fewer than 2 points");
    const double t0 = traj.times.front();
    const double t1 = traj.times.back();
    const std::size_t first = window_start(traj, t0 + 0.5 * (t1 - t0));
    const std::size_t n = traj.times.size() - first;
    if (n < 2) throw EmptyWindow("last half of the trajectory has fewer than 2 points");

    const bool have_logs = traj.log_states.size() == traj.states.size();
    auto log_at = [&](std::size_t k, std::size_t i) {
        if (have_logs) return traj.log_states[k][i];
        const double v = traj.states[k][i];
        if (!(v > traj.floor))
            throw DegenerateInput("state at or below floor at t = " + std::to_string(traj.times[k]));
        return std::log(v);
    };

    double t_mean = 0.0;
    Vec2 y_mean{0.0, 0.0};
    for (std::size_t k = first; k < traj.times.size(); ++k) {
        t_mean += traj.times[k];
        for (std::size_t i = 0; i < 2; ++i) y_mean[i] += log_at(k, i);
    }
    t_mean /= static_cast<double>(n);
    y_mean[0] /= static_cast<double>(n);
    y_mean[1] /= static_cast<double>(n);

    double sxx = 0.0;
    Vec2 sxy{0.0, 0.0};
    for (std::size_t k = first; k < traj.times.size(); ++k) {
        const double dt = traj.times[k] - t_mean;
        sxx += dt * dt;
        for (std::size_t i = 0; i < 2; ++i) sxy[i] += dt * (log_at(k, i) - y_mean[i]);
    }
    return {sxy[0] / sxx, sxy[1] / sxx};
}

void write_csv(std::ostream& os, const Trajectory& traj) {
    os << "t,x1,x2\n";
    char buf[96];
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", traj.times[k], traj.states[k][0],
                      traj.states[k][1]);
        os << buf;
    }
}

}  // namespace lvharvest
