#include "lvharvest/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lvharvest/classify.hpp"
#include "lvharvest/config.hpp"
#include "lvharvest/errors.hpp"
#include "lvharvest/harvest.hpp"
#include "lvharvest/mc.hpp"
#include "lvharvest/sde.hpp"
#include "lvharvest/serialize.hpp"

#ifndef LVHARVEST_VERSION
#define LVHARVEST_VERSION "0.0.0"
#endif

namespace lvharvest {

namespace {

struct Overrides {
    std::string config;
    std::optional<double> h1, h2, dt, t_end;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> n_paths;
    std::optional<unsigned> threads;
    bool formula_only = false;
    std::string out;
    double tol = kDefaultClassifyTol;
    int species = 1;
    std::string scales = "0:10:11";
    std::optional<double> h_max;
    double step = 0.05;
};

void add_common(CLI::App* sub, Overrides& o) {
    sub->add_option("--config", o.config, "Run configuration (JSON)")->required();
    sub->add_option("--h1", o.h1, "Override harvesting effort h1");
    sub->add_option("--h2", o.h2, "Override harvesting effort h2");
    sub->add_option("--seed", o.seed, "Override the simulation and ensemble seed");
    sub->add_option("--dt", o.dt, "Override the time step");
    sub->add_option("--t-end", o.t_end, "Override the horizon");
    sub->add_option("--n-paths", o.n_paths, "Override the ensemble size");
    sub->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
    sub->add_option("--out", o.out, "Output file (default: stdout)");
}

RunConfig load(const Overrides& o) {
    RunConfig cfg = load_config(o.config);
    Vec2 h = cfg.harvest.values();
    if (o.h1) h[0] = *o.h1;
    if (o.h2) h[1] = *o.h2;
    cfg.harvest = HarvestEffort(h);
    if (o.seed) cfg.sim.seed = cfg.ensemble.master_seed = *o.seed;
    if (o.dt) cfg.sim.dt = *o.dt;
    if (o.t_end) cfg.sim.t_end = *o.t_end;
    if (o.n_paths) cfg.ensemble.n_paths = *o.n_paths;
    if (o.threads) cfg.ensemble.threads = *o.threads;
    validate(cfg.sim);
    cfg.ensemble.sim = cfg.sim;
    return cfg;
}

/// Writes to --out when given, otherwise to `out`.
void emit(const Overrides& o, std::ostream& out, const std::function<void(std::ostream&)>& write) {
    if (o.out.empty()) {
        write(out);
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw InvalidConfig("cannot open output file " + o.out);
    write(f);
    if (!f) throw InvalidConfig("failed writing " + o.out);
}

std::vector<double> parse_scales(const std::string& spec) {
    std::vector<double> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) {
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw InvalidConfig("--scales expects a:b:n, got '" + spec + "'");
        }
    }
    if (parts.size() != 3 || parts[2] < 1 || parts[2] != std::floor(parts[2]))
        throw InvalidConfig("--scales expects a:b:n with integer n >= 1, got '" + spec + "'");
    const auto n = static_cast<std::size_t>(parts[2]);
    std::vector<double> v;
    for (std::size_t i = 0; i < n; ++i)
        v.push_back(n == 1 ? parts[0]
                           : parts[0] + (parts[1] - parts[0]) * static_cast<double>(i) /
                                            static_cast<double>(n - 1));
    return v;
}

// ---------------------------------------------------------------- verify

struct Check {
    std::string name;
    double expected;
    double actual;
    double tol;
    bool relative = false;

    bool pass() const {
        const double bound = relative ? tol * std::abs(expected) : tol;
        return std::isfinite(actual) && std::abs(actual - expected) <= bound;
    }
};

struct NoiseCase {
    const char* name;
    PeriodicFn alpha1, alpha2;
    double h1, h2, y, b1, b2, d1, d2, phi1, phi2;
};

PeriodicFn noise(double base) {
    return PeriodicFn::harmonic(base, {{0.01, 1, 0.0, HarmonicKind::Cosine}});
}

// Values reported for the three seasonal noise settings, 2 decimals.
std::vector<NoiseCase> reference_table() {
    return {
        {"case_i", noise(0.1), noise(0.1), 3.29, 3.26, 4.99, 3.20, 3.33, 9.88, 12.72, 2.71, 2.69},
        {"case_ii", noise(0.7), noise(0.1), 3.17, 3.27, 4.83, 3.08, 3.33, 9.46, 12.77, 2.48, 2.57},
        {"case_iii", noise(0.1), noise(1.1), 3.29, 2.96, 4.50, 3.21, 3.03, 10.02, 11.43, 2.41, 2.08},
    };
}

int run_verify(const RunConfig& cfg, std::ostream& out) {
    constexpr double kTabTol = 0.02;
    constexpr double kEffortTol = 0.01;
    std::vector<Check> checks;
    bool all_valid = true;

    ModelParams base = cfg.model;
    checks.push_back({"delta", 14.85, determinant(base.c), 1e-12});
    checks.push_back({"sup_r1", 6.6, sup_over_period(base.r[0]), 1e-8});

    OptimalPolicy case_i{};
    for (const auto& nc : reference_table()) {
        ModelParams p = base;
        p.alpha = {nc.alpha1, nc.alpha2};
        const OptimalPolicy pol = optimal_policy(p);
        if (std::string(nc.name) == "case_i") case_i = pol;
        const std::string n = nc.name;
        const auto& d = pol.at_optimum;
        checks.push_back({n + ".h1_star", nc.h1, pol.H_star[0], kEffortTol});
        checks.push_back({n + ".h2_star", nc.h2, pol.H_star[1], kEffortTol});
        checks.push_back({n + ".y_star", nc.y, pol.Y_star, kTabTol});
        checks.push_back({n + ".b_int1", nc.b1, d.b_int[0], kTabTol});
        checks.push_back({n + ".b_int2", nc.b2, d.b_int[1], kTabTol});
        checks.push_back({n + ".delta1", nc.d1, d.delta1, kTabTol});
        checks.push_back({n + ".delta2", nc.d2, d.delta2, kTabTol});
        checks.push_back({n + ".phi1", nc.phi1, d.phi[0], kTabTol});
        checks.push_back({n + ".phi2", nc.phi2, d.phi[1], kTabTol});
        checks.push_back({n + ".valid", 1.0, pol.valid ? 1.0 : 0.0, 0.0});
        all_valid = all_valid && pol.valid;
    }

    // noise sweeps take case (i) to the other two settings
    ModelParams low = base;
    low.alpha = {noise(0.1), noise(0.1)};
    const auto sweep1 = noise_sensitivity(low, 0, {1.0, 7.0});
    const auto sweep2 = noise_sensitivity(low, 1, {1.0, 11.0});
    checks.push_back({"sweep_alpha1_x7.y_star", 4.83, sweep1[1].Y_star, kTabTol});
    checks.push_back({"sweep_alpha2_x11.y_star", 4.50, sweep2[1].Y_star, kTabTol});

    const GridOptimum grid = grid_search_oracle(low, 6.0, 0.01);
    checks.push_back({"grid.h1_best", case_i.H_star[0], grid.H_best[0], 0.01});
    checks.push_back({"grid.h2_best", case_i.H_star[1], grid.H_best[1], 0.01});
    checks.push_back({"grid.y_not_above_y_star", 0.0, grid.Y_best > case_i.Y_star ? 1.0 : 0.0, 0.0});

    EnsembleConfig ens = cfg.ensemble;
    const HarvestEffort h_star(case_i.H_star);
    const EnsembleStats stats = run_ensemble(low, h_star, ens);
    checks.push_back({"mc.empirical_yield", 4.99, stats.empirical_yield.est, 0.05, true});
    checks.push_back({"mc.time_avg1", case_i.at_optimum.delta1 / case_i.at_optimum.delta,
                      stats.time_avg[0].mean, 0.05, true});
    checks.push_back({"mc.time_avg2", case_i.at_optimum.delta2 / case_i.at_optimum.delta,
                      stats.time_avg[1].mean, 0.05, true});

    std::size_t passed = 0;
    char line[256];
    for (const auto& c : checks) {
        const bool ok = c.pass();
        passed += ok ? 1 : 0;
        std::snprintf(line, sizeof line, "%s  %-26s expected=%-10.6g actual=%-14.10g tol=%g%s\n",
                      ok ? "PASS" : "FAIL", c.name.c_str(), c.expected, c.actual, c.tol,
                      c.relative ? " (rel)" : "");
        out << line;
    }
    out << "verify: " << passed << "/" << checks.size() << " checks passed\n";
    return passed == checks.size() && all_valid ? kExitOk : kExitMismatch;
}

void report_error(std::ostream& err, const std::string& kind, const std::string& message) {
    nlohmann::json j{{"error", kind}, {"message", message}};
    err << j.dump() << '\n';
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stochastic seasonal Lotka-Volterra competition: regimes, optimal harvesting, "
                 "simulation"};
    app.set_version_flag("--version", LVHARVEST_VERSION);
    app.require_subcommand(1);

    Overrides o;
    auto* classify_cmd = app.add_subcommand("classify", "Long-run regime at the configured effort (JSON)");
    add_common(classify_cmd, o);
    classify_cmd->add_option("--tol", o.tol, "Indeterminate band around zero");

    auto* optimize_cmd = app.add_subcommand("optimize", "Optimal harvesting effort and yield (JSON)");
    add_common(optimize_cmd, o);

    auto* simulate_cmd = app.add_subcommand("simulate", "Single path as CSV t,x1,x2");
    add_common(simulate_cmd, o);

    auto* ensemble_cmd = app.add_subcommand("ensemble", "Monte Carlo ensemble statistics (JSON)");
    add_common(ensemble_cmd, o);

    auto* noise_cmd = app.add_subcommand("sweep-noise", "Optimal policy versus noise scale (CSV)");
    add_common(noise_cmd, o);
    noise_cmd->add_option("--species", o.species, "Species whose noise is scaled (1 or 2)")
        ->check(CLI::Range(1, 2));
    noise_cmd->add_option("--scales", o.scales, "Scale grid a:b:n");

    auto* surface_cmd = app.add_subcommand("sweep-harvest", "Yield surface over an effort lattice (CSV)");
    add_common(surface_cmd, o);
    surface_cmd->add_option("--h-max", o.h_max, "Lattice bound (default max(L1, L2))");
    surface_cmd->add_option("--step", o.step, "Lattice spacing");
    surface_cmd->add_flag("--formula-only", o.formula_only,
                          "Evaluate the yield formula outside the coexistence regime too");

    auto* verify_cmd = app.add_subcommand("verify", "Reproduce the reference table; exit 3 on mismatch");
    add_common(verify_cmd, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        report_error(err, "UsageError", e.what());
        return kExitUsage;
    }

    try {
        const RunConfig cfg = load(o);
        if (*classify_cmd) {
            const RegimeReport rep = classify(cfg.model, cfg.harvest, o.tol);
            emit(o, out, [&](std::ostream& s) { s << to_json(rep, cfg.harvest) << '\n'; });
        } else if (*optimize_cmd) {
            const OptimalPolicy pol = optimal_policy(cfg.model);
            emit(o, out, [&](std::ostream& s) { s << to_json(pol) << '\n'; });
        } else if (*simulate_cmd) {
            const Trajectory traj = simulate(cfg.model, cfg.harvest, cfg.sim);
            emit(o, out, [&](std::ostream& s) { write_csv(s, traj); });
        } else if (*ensemble_cmd) {
            const EnsembleStats stats = run_ensemble(cfg.model, cfg.harvest, cfg.ensemble);
            emit(o, out, [&](std::ostream& s) { s << to_json(stats) << '\n'; });
        } else if (*noise_cmd) {
            const auto rows = noise_sensitivity(cfg.model, static_cast<std::size_t>(o.species - 1),
                                                parse_scales(o.scales));
            emit(o, out, [&](std::ostream& s) { write_sensitivity_csv(s, rows); });
        } else if (*surface_cmd) {
            const Vec2 L = L_vector(cfg.model);
            const double h_max = o.h_max ? *o.h_max : std::max({L[0], L[1], 0.0});
            const auto points = harvest_surface(cfg.model, h_max, o.step, o.formula_only);
            emit(o, out, [&](std::ostream& s) { write_surface_csv(s, points); });
        } else if (*verify_cmd) {
            int code = kExitOk;
            emit(o, out, [&](std::ostream& s) { code = run_verify(cfg, s); });
            if (code != kExitOk) report_error(err, "VerifyMismatch", "verify found values outside tolerance");
            return code;
        }
    } catch (const AssumptionViolation& e) {
        report_error(err, e.kind(), e.what());
        return kExitAssumption;
    } catch (const RegimeError& e) {
        report_error(err, e.kind(), e.what());
        return kExitAssumption;
    } catch (const EmptyFeasible& e) {
        report_error(err, e.kind(), e.what());
        return kExitAssumption;
    } catch (const Error& e) {
        report_error(err, e.kind(), e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        report_error(err, "Error", e.what());
        return kExitUsage;
    }
    return kExitOk;
}

}  // namespace lvharvest
