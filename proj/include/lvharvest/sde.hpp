#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "lvharvest/model.hpp"

namespace lvharvest {

enum class Scheme {
    DirectEM,  ///< Euler-Maruyama on x, clamped at `floor`
    LogEM,     ///< Euler-Maruyama on ln x (Ito-transformed), strictly positive
};

std::string_view to_string(Scheme s);
Scheme scheme_from_string(std::string_view s);

inline constexpr std::size_t kMaxRecordedPoints = 200000;

struct SimConfig {
    double dt = 1e-3;
    double t_end = 200.0;
    Vec2 x0{0.01, 0.01};
    std::uint64_t seed = 0;
    Scheme scheme = Scheme::LogEM;
    /// Store every k-th step; 0 picks the smallest stride keeping at most
    /// kMaxRecordedPoints points.
    std::size_t record_stride = 0;
    double floor = 1e-12;

    bool operator==(const SimConfig&) const = default;
};

/// Throws InvalidConfig.
void validate(const SimConfig& cfg);

/// Number of steps: t_end / dt rounded to the nearest integer (at least 1).
std::size_t step_count(const SimConfig& cfg);
std::size_t effective_stride(const SimConfig& cfg);

struct Trajectory {
    std::vector<double> times;
    std::vector<Vec2> states;
    /// ln x at the recorded points; filled for LogEM only.
    std::vector<Vec2> log_states;
    std::uint64_t seed = 0;
    Scheme scheme = Scheme::LogEM;
    double dt = 0.0;
    double floor = 0.0;
};

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t z);
/// Deterministic child seed number `k` of `parent`.
std::uint64_t split_seed(std::uint64_t parent, std::uint64_t k);

/// Euler-Maruyama path of the model. Coefficients are evaluated at the left
/// endpoint of each step; species i draws its normals from an independent
/// stream seeded with split_seed(cfg.seed, i).
Trajectory simulate(const ModelParams& params, const HarvestEffort& H, const SimConfig& cfg);

/// Same scheme driven by caller-supplied Brownian increments (one per step
/// and species, already scaled: variance dt). `cfg.seed` is only echoed.
Trajectory simulate_driven(const ModelParams& params, const HarvestEffort& H,
                           const SimConfig& cfg, std::span<const double> dW1,
                           std::span<const double> dW2);

/// Trapezoidal average of each component over [burn_in * t_end, t_end].
Vec2 time_average(const Trajectory& traj, double burn_in_fraction = 0.5);

/// Least-squares slope of ln x_i(t) over the last half of the trajectory.
Vec2 log_growth_rate(const Trajectory& traj);

/// CSV with header `t,x1,x2`, values at 17 significant digits.
void write_csv(std::ostream& os, const Trajectory& traj);

}  // namespace lvharvest
