#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "lvharvest/model.hpp"
#include "lvharvest/sde.hpp"

namespace lvharvest {

struct EnsembleConfig {
    std::size_t n_paths = 1000;
    SimConfig sim;
    std::uint64_t master_seed = 0;
    /// Fraction of [0, t_end] discarded before per-path time averages.
    double burn_in = 0.5;
    /// Phase points per period for phase_means.
    std::size_t phase_points = 8;
    /// Upper bound on the number of mean_path samples.
    std::size_t mean_path_points = 2001;
    /// Worker threads; 0 uses the hardware concurrency. Results do not depend on it.
    unsigned threads = 0;

    bool operator==(const EnsembleConfig&) const = default;
};

void validate(const EnsembleConfig& cfg);

struct Estimate {
    double est = 0.0;
    double se = 0.0;
};

struct DistributionSummary {
    double mean = 0.0;
    double std = 0.0;
    double q05 = 0.0;
    double q50 = 0.0;
    double q95 = 0.0;
};

struct MeanPath {
    std::vector<double> t;
    std::vector<Vec2> mean;
    std::vector<Vec2> se;
};

/// Ensemble means at t_end - 2 + k/m ("prev") and t_end - 1 + k/m ("last").
struct PhaseMeans {
    std::vector<double> phase;  ///< k/m
    std::vector<Vec2> mean_prev;
    std::vector<Vec2> mean_last;
    std::vector<Vec2> se_last;
    /// Standard error of the per-path difference last - prev.
    std::vector<Vec2> se_diff;
};

struct EnsembleStats {
    MeanPath mean_path;
    std::vector<Vec2> time_avg_per_path;
    std::array<DistributionSummary, 2> time_avg;
    PhaseMeans phase_means;
    /// Sum_i h_i * integral of E x_i over the final period [t_end - 1, t_end].
    Estimate empirical_yield;
    std::size_t n_paths_ok = 0;
    std::vector<std::size_t> failed_paths;
    EnsembleConfig config;
    HarvestEffort harvest;
};

/// Runs n_paths independent paths; path k uses seed split_seed(master_seed, k).
/// Failing paths (NonFinite) are dropped; more than 1% failing aborts with
/// NonFinite carrying the first failing path index.
EnsembleStats run_ensemble(const ModelParams& params, const HarvestEffort& H,
                           const EnsembleConfig& cfg);

Estimate empirical_yield(const ModelParams& params, const HarvestEffort& H,
                         const EnsembleConfig& cfg);

struct ConvergenceReport {
    std::vector<double> t;
    /// E|x_i(t) - x~_i(t)| under synchronous coupling.
    std::vector<Vec2> gap;
    Vec2 gap_at_1{};
    Vec2 gap_final{};
    /// gap_final < 5% of gap_at_1 for both species.
    bool decayed = false;
    /// Least-squares slope of ln gap over t >= 1 (points with gap > 0).
    Vec2 log_slope{};
};

/// Paired ensembles from x0_a and x0_b with identical noise per path index.
/// Throws AssumptionViolation unless c11 > c21 and c22 > c12.
ConvergenceReport convergence_check(const ModelParams& params, const HarvestEffort& H,
                                    const Vec2& x0_a, const Vec2& x0_b, const EnsembleConfig& cfg);

struct PeriodicityReport {
    PhaseMeans phases;
    std::vector<Vec2> discrepancy;  ///< |mean_last - mean_prev|
    double max_rel_discrepancy = 0.0;
    /// Largest |discrepancy| / se_diff over phases and species.
    double max_z = 0.0;
    /// Every discrepancy below 3 standard errors.
    bool within_3se = false;
    /// max - min of mean_last over phases, per species.
    Vec2 cycle_amplitude{};
    Vec2 max_discrepancy{};
    bool assumption2 = false;
};

PeriodicityReport periodicity_check(const ModelParams& params, const HarvestEffort& H,
                                    const EnsembleConfig& cfg);

}  // namespace lvharvest
