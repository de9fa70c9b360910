#include "lvharvest/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <thread>

#include "lvharvest/classify.hpp"
#include "lvharvest/detail/stepper.hpp"
#include "lvharvest/errors.hpp"

namespace lvharvest {

namespace {

constexpr std::size_t kChunkPaths = 16;

// Welford running moments; merge() is Chan's pairwise combination.
struct Moments {
    double n = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        n += 1.0;
        const double d = x - mean;
        mean += d / n;
        m2 += d * (x - mean);
    }
    void merge(const Moments& o) {
        if (o.n == 0.0) return;
        if (n == 0.0) {
            *this = o;
            return;
        }
        const double total = n + o.n;
        const double d = o.mean - mean;
        mean += d * (o.n / total);
        m2 += o.m2 + d * d * (n * o.n / total);
        n = total;
    }
    double variance() const { return n > 1.0 ? std::max(m2, 0.0) / (n - 1.0) : 0.0; }
    double stddev() const { return std::sqrt(variance()); }
    double stderr_() const { return n > 0.0 ? std::sqrt(variance() / n) : 0.0; }
};

struct Moments2 {
    Moments m[2];
    void add(const Vec2& x) {
        m[0].add(x[0]);
        m[1].add(x[1]);
    }
    void merge(const Moments2& o) {
        m[0].merge(o.m[0]);
        m[1].merge(o.m[1]);
    }
    Vec2 mean() const { return {m[0].mean, m[1].mean}; }
    Vec2 se() const { return {m[0].stderr_(), m[1].stderr_()}; }
};

unsigned worker_count(unsigned requested, std::size_t chunks) {
    unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(chunks, 1)));
}

/// Calls work(chunk, first_path, last_path) for every fixed-size chunk.
template <class Work>
void for_each_chunk(std::size_t n_paths, unsigned threads, Work&& work) {
    const std::size_t chunks = (n_paths + kChunkPaths - 1) / kChunkPaths;
    std::vector<std::exception_ptr> errors(chunks);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t c = next++; c < chunks; c = next++) {
            try {
                work(c, c * kChunkPaths, std::min(n_paths, (c + 1) * kChunkPaths));
            } catch (...) {
                errors[c] = std::current_exception();
            }
        }
    };
    const unsigned n = worker_count(threads, chunks);
    if (n <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n);
        for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

std::size_t steps_per_period(double dt) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(1.0 / dt)));
}

void check_failures(const std::vector<std::size_t>& failed, std::size_t n_paths) {
    if (failed.empty()) return;
    if (failed.size() * 100 > n_paths) {
        throw NonFinite("path " + std::to_string(failed.front()) + " produced a non-finite state; " +
                            std::to_string(failed.size()) + " of " + std::to_string(n_paths) +
                            " paths failed (more than 1%)",
                        0, failed.front());
    }
}

DistributionSummary summarize(std::vector<double> values) {
    DistributionSummary s;
    if (values.empty()) return s;
    Moments m;
    for (double v : values) m.add(v);
    s.mean = m.mean;
    s.std = m.stddev();
    std::sort(values.begin(), values.end());
    auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(values.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const std::size_t hi = std::min(lo + 1, values.size() - 1);
        const double w = pos - static_cast<double>(lo);
        return values[lo] + w * (values[hi] - values[lo]);
    };
    s.q05 = quantile(0.05);
    s.q50 = quantile(0.50);
    s.q95 = quantile(0.95);
    return s;
}

struct PathSummary {
    Vec2 time_avg{};
    double yield = 0.0;
    std::vector<Vec2> phase_prev;
    std::vector<Vec2> phase_last;
    bool ok = false;
};

struct ChunkResult {
    std::vector<Moments2> mean_path;
    std::vector<std::size_t> failed;
};

}  // namespace

void validate(const EnsembleConfig& cfg) {
    validate(cfg.sim);
    if (cfg.n_paths < 2) throw InvalidConfig("n_paths must be >= 2");
    if (!(cfg.burn_in >= 0.0 && cfg.burn_in < 1.0)) throw InvalidConfig("burn_in must lie in [0,1)");
    if (cfg.phase_points < 1) throw InvalidConfig("phase_points must be >= 1");
    if (cfg.mean_path_points < 2) throw InvalidConfig("mean_path_points must be >= 2");
    const double horizon = static_cast<double>(step_count(cfg.sim)) * cfg.sim.dt;
    if (horizon < 2.0 - 1e-9) throw InvalidConfig("ensemble t_end must cover at least two periods");
}

EnsembleStats run_ensemble(const ModelParams& params, const HarvestEffort& H,
                           const EnsembleConfig& cfg) {
    validate(params);
    validate(cfg);
    const SimConfig& sim = cfg.sim;
    const std::size_t steps = step_count(sim);
    const double dt = sim.dt;
    const double horizon = static_cast<double>(steps) * dt;
    const std::size_t per = steps_per_period(dt);

    const auto k_burn = static_cast<std::size_t>(
        std::ceil(cfg.burn_in * static_cast<double>(steps) - 1e-9));
    const std::size_t k_yield = steps >= per ? steps - per : 0;

    const std::size_t m = cfg.phase_points;
    std::vector<std::size_t> phase_steps;  // prev phases then last phases, increasing
    phase_steps.reserve(2 * m);
    for (int period = 2; period >= 1; --period)
        for (std::size_t j = 0; j < m; ++j) {
            const double t = horizon - period + static_cast<double>(j) / static_cast<double>(m);
            phase_steps.push_back(static_cast<std::size_t>(std::llround(t / dt)));
        }

    const std::size_t mp_stride =
        std::max<std::size_t>(1, (steps + cfg.mean_path_points - 2) / (cfg.mean_path_points - 1));
    std::vector<std::size_t> mp_steps;
    for (std::size_t k = 0; k <= steps; k += mp_stride) mp_steps.push_back(k);
    if (mp_steps.back() != steps) mp_steps.push_back(steps);

    const detail::CoefficientSchedule coeffs(params, H, dt);
    const std::size_t chunks = (cfg.n_paths + kChunkPaths - 1) / kChunkPaths;
    std::vector<ChunkResult> chunk_results(chunks);
    std::vector<PathSummary> paths(cfg.n_paths);

    for_each_chunk(cfg.n_paths, cfg.threads, [&](std::size_t c, std::size_t first, std::size_t last) {
        ChunkResult& out = chunk_results[c];
        out.mean_path.assign(mp_steps.size(), Moments2{});
        std::vector<Vec2> samples(mp_steps.size());
        for (std::size_t p = first; p < last; ++p) {
            SimConfig path_cfg = sim;
            path_cfg.seed = split_seed(cfg.master_seed, p);
            PathSummary& ps = paths[p];
            ps.phase_prev.assign(m, Vec2{});
            ps.phase_last.assign(m, Vec2{});

            Vec2 avg_area{0.0, 0.0}, yield_area{0.0, 0.0}, prev{0.0, 0.0};
            std::size_t next_phase = 0, next_mp = 0;
            try {
                detail::integrate(
                    params, coeffs, path_cfg, steps, detail::GaussianNoise(path_cfg.seed, dt),
                    [&](std::size_t k, const Vec2& x, const Vec2&) {
                        if (k > k_burn)
                            for (std::size_t i = 0; i < 2; ++i) avg_area[i] += 0.5 * dt * (x[i] + prev[i]);
                        if (k > k_yield)
                            for (std::size_t i = 0; i < 2; ++i) yield_area[i] += 0.5 * dt * (x[i] + prev[i]);
                        while (next_phase < phase_steps.size() && phase_steps[next_phase] == k) {
                            if (next_phase < m) ps.phase_prev[next_phase] = x;
                            else ps.phase_last[next_phase - m] = x;
                            ++next_phase;
                        }
                        if (next_mp < mp_steps.size() && mp_steps[next_mp] == k) samples[next_mp++] = x;
                        prev = x;
                    });
            } catch (const NonFinite&) {
                out.failed.push_back(p);
                continue;
            }
            const double span = static_cast<double>(steps - k_burn) * dt;
            ps.time_avg = {avg_area[0] / span, avg_area[1] / span};
            ps.yield = H[0] * yield_area[0] + H[1] * yield_area[1];
            ps.ok = true;
            for (std::size_t r = 0; r < samples.size(); ++r) out.mean_path[r].add(samples[r]);
        }
    });

    EnsembleStats stats;
    stats.config = cfg;
    stats.harvest = H;
    for (const auto& cr : chunk_results)
        stats.failed_paths.insert(stats.failed_paths.end(), cr.failed.begin(), cr.failed.end());
    check_failures(stats.failed_paths, cfg.n_paths);

    std::vector<Moments2> mean_path(mp_steps.size());
    for (const auto& cr : chunk_results)
        for (std::size_t r = 0; r < mean_path.size(); ++r) mean_path[r].merge(cr.mean_path[r]);
    stats.mean_path.t.reserve(mp_steps.size());
    for (std::size_t r = 0; r < mp_steps.size(); ++r) {
        stats.mean_path.t.push_back(static_cast<double>(mp_steps[r]) * dt);
        stats.mean_path.mean.push_back(mean_path[r].mean());
        stats.mean_path.se.push_back(mean_path[r].se());
    }

    std::vector<double> avg1, avg2;
    Moments yield;
    std::vector<Moments2> prev_m(m), last_m(m), diff_m(m);
    for (const auto& ps : paths) {
        if (!ps.ok) continue;
        ++stats.n_paths_ok;
        stats.time_avg_per_path.push_back(ps.time_avg);
        avg1.push_back(ps.time_avg[0]);
        avg2.push_back(ps.time_avg[1]);
        yield.add(ps.yield);
        for (std::size_t j = 0; j < m; ++j) {
            prev_m[j].add(ps.phase_prev[j]);
            last_m[j].add(ps.phase_last[j]);
            diff_m[j].add({ps.phase_last[j][0] - ps.phase_prev[j][0],
                           ps.phase_last[j][1] - ps.phase_prev[j][1]});
        }
    }
    stats.time_avg = {summarize(std::move(avg1)), summarize(std::move(avg2))};
    stats.empirical_yield = {yield.mean, yield.stderr_()};
    auto& ph = stats.phase_means;
    for (std::size_t j = 0; j < m; ++j) {
        ph.phase.push_back(static_cast<double>(j) / static_cast<double>(m));
        ph.mean_prev.push_back(prev_m[j].mean());
        ph.mean_last.push_back(last_m[j].mean());
        ph.se_last.push_back(last_m[j].se());
        ph.se_diff.push_back(diff_m[j].se());
    }
    return stats;
}

Estimate empirical_yield(const ModelParams& params, const HarvestEffort& H,
                         const EnsembleConfig& cfg) {
    return run_ensemble(params, H, cfg).empirical_yield;
}

ConvergenceReport convergence_check(const ModelParams& params, const HarvestEffort& H,
                                    const Vec2& x0_a, const Vec2& x0_b, const EnsembleConfig& cfg) {
    validate(params);
    const auto& c = params.c;
    if (!(c[0][0] > c[1][0] && c[1][1] > c[0][1]))
        throw AssumptionViolation("convergence in mean requires c11 > c21 and c22 > c12");
    if (!(x0_a[0] > 0.0 && x0_a[1] > 0.0 && x0_b[0] > 0.0 && x0_b[1] > 0.0))
        throw InvalidConfig("both initial states must be strictly positive");
    EnsembleConfig base = cfg;
    base.sim.x0 = x0_a;
    validate(base);

    const SimConfig& sim = base.sim;
    const std::size_t steps = step_count(sim);
    const double dt = sim.dt;
    const std::size_t per = steps_per_period(dt);
    std::vector<std::size_t> grid;
    for (std::size_t k = 0; k <= steps; k += per) grid.push_back(k);

    const detail::CoefficientSchedule coeffs(params, H, dt);
    const std::size_t chunks = (cfg.n_paths + kChunkPaths - 1) / kChunkPaths;
    std::vector<std::vector<Moments2>> chunk_gaps(chunks);
    std::vector<std::vector<std::size_t>> chunk_failed(chunks);

    for_each_chunk(cfg.n_paths, cfg.threads, [&](std::size_t ci, std::size_t first, std::size_t last) {
        auto& gaps = chunk_gaps[ci];
        gaps.assign(grid.size(), Moments2{});
        std::vector<Vec2> xa(grid.size()), xb(grid.size());
        for (std::size_t p = first; p < last; ++p) {
            const std::uint64_t seed = split_seed(cfg.master_seed, p);
            auto record = [&](std::vector<Vec2>& into) {
                std::size_t next = 0;
                return [&into, &grid, next](std::size_t k, const Vec2& x, const Vec2&) mutable {
                    if (next < grid.size() && grid[next] == k) into[next++] = x;
                };
            };
            try {
                SimConfig a = sim, b = sim;
                a.x0 = x0_a;
                b.x0 = x0_b;
                a.seed = b.seed = seed;
                detail::integrate(params, coeffs, a, steps, detail::GaussianNoise(seed, dt), record(xa));
                detail::integrate(params, coeffs, b, steps, detail::GaussianNoise(seed, dt), record(xb));
            } catch (const NonFinite&) {
                chunk_failed[ci].push_back(p);
                continue;
            }
            for (std::size_t g = 0; g < grid.size(); ++g)
                gaps[g].add({std::abs(xa[g][0] - xb[g][0]), std::abs(xa[g][1] - xb[g][1])});
        }
    });

    std::vector<std::size_t> failed;
    for (const auto& f : chunk_failed) failed.insert(failed.end(), f.begin(), f.end());
    check_failures(failed, cfg.n_paths);

    std::vector<Moments2> gaps(grid.size());
    for (const auto& cg : chunk_gaps)
        for (std::size_t g = 0; g < grid.size(); ++g) gaps[g].merge(cg[g]);

    ConvergenceReport rep;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        rep.t.push_back(static_cast<double>(grid[g]) * dt);
        rep.gap.push_back(gaps[g].mean());
    }
    rep.gap_at_1 = rep.gap.size() > 1 ? rep.gap[1] : rep.gap[0];
    rep.gap_final = rep.gap.back();
    rep.decayed = rep.gap_final[0] < 0.05 * rep.gap_at_1[0] && rep.gap_final[1] < 0.05 * rep.gap_at_1[1];

    for (std::size_t i = 0; i < 2; ++i) {
        double n = 0.0, st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
        for (std::size_t g = 1; g < rep.t.size(); ++g) {
            const double v = rep.gap[g][i];
            if (!(v > 0.0)) continue;
            const double y = std::log(v);
            n += 1.0;
            st += rep.t[g];
            sy += y;
            stt += rep.t[g] * rep.t[g];
            sty += rep.t[g] * y;
        }
        const double den = n * stt - st * st;
        rep.log_slope[i] = n >= 2.0 && den > 0.0 ? (n * sty - st * sy) / den
                                                : std::numeric_limits<double>::quiet_NaN();
    }
    return rep;
}

PeriodicityReport periodicity_check(const ModelParams& params, const HarvestEffort& H,
                                    const EnsembleConfig& cfg) {
    const EnsembleStats stats = run_ensemble(params, H, cfg);
    PeriodicityReport rep;
    rep.phases = stats.phase_means;
    rep.assumption2 = check_assumptions(params, H).h2;
    rep.within_3se = true;
    const auto& ph = rep.phases;
    Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    Vec2 hi{-lo[0], -lo[1]};
    for (std::size_t j = 0; j < ph.phase.size(); ++j) {
        Vec2 d{};
        for (std::size_t i = 0; i < 2; ++i) {
            d[i] = std::abs(ph.mean_last[j][i] - ph.mean_prev[j][i]);
            const double scale = std::max(std::abs(ph.mean_last[j][i]), 1e-300);
            rep.max_rel_discrepancy = std::max(rep.max_rel_discrepancy, d[i] / scale);
            rep.max_discrepancy[i] = std::max(rep.max_discrepancy[i], d[i]);
            const double se = ph.se_diff[j][i];
            // exact ties (noise-free runs) count as agreement
            const double slack = 1e-12 * std::max(1.0, std::abs(ph.mean_last[j][i]));
            if (!(d[i] < 3.0 * se + slack)) rep.within_3se = false;
            if (se > 0.0) rep.max_z = std::max(rep.max_z, d[i] / se);
            lo[i] = std::min(lo[i], ph.mean_last[j][i]);
            hi[i] = std::max(hi[i], ph.mean_last[j][i]);
        }
        rep.discrepancy.push_back(d);
    }
    rep.cycle_amplitude = {hi[0] - lo[0], hi[1] - lo[1]};
    return rep;
}

}  // namespace lvharvest
