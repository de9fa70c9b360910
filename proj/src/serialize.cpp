#include "lvharvest/serialize.hpp"

#include <cstdio>
#include <ostream>

#include <json.hpp>

namespace lvharvest {

using nlohmann::json;

namespace {

json vec(const Vec2& v) { return json::array({v[0], v[1]}); }

json column(const std::vector<Vec2>& v, std::size_t i) {
    json out = json::array();
    for (const auto& p : v) out.push_back(p[i]);
    return out;
}

json summary(const DistributionSummary& s) {
    return {{"mean", s.mean}, {"std", s.std}, {"q05", s.q05}, {"q50", s.q50}, {"q95", s.q95}};
}

json phases(const PhaseMeans& p) {
    return {{"phase", p.phase},
            {"prev_m1", column(p.mean_prev, 0)},
            {"prev_m2", column(p.mean_prev, 1)},
            {"m1", column(p.mean_last, 0)},
            {"m2", column(p.mean_last, 1)},
            {"se1", column(p.se_last, 0)},
            {"se2", column(p.se_last, 1)},
            {"se_diff1", column(p.se_diff, 0)},
            {"se_diff2", column(p.se_diff, 1)}};
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string to_json(const RegimeReport& rep, const HarvestEffort& H, int indent) {
    json j;
    j["regime"] = std::string(to_string(rep.regime));
    j["predicted_averages"] = rep.predicted_averages ? vec(*rep.predicted_averages) : json(nullptr);
    j["assumptions"] = {{"A1", rep.assumptions.a1},
                        {"H1", rep.assumptions.h1},
                        {"H2", rep.assumptions.h2},
                        {"A3", rep.assumptions.a3}};
    j["margins"] = {{"b_int1", rep.margins.b1},
                    {"b_int2", rep.margins.b2},
                    {"delta1", rep.margins.delta1},
                    {"delta2", rep.margins.delta2}};
    j["delta"] = rep.delta;
    j["harvest"] = vec(H.values());
    return j.dump(indent);
}

std::string to_json(const OptimalPolicy& pol, int indent) {
    const auto& k = pol.conditions;
    const auto& d = pol.at_optimum;
    json j;
    j["H_star"] = vec(pol.H_star);
    j["Y_star"] = pol.Y_star;
    j["valid"] = pol.valid;
    j["conditions"] = {{"b1_positive", k.b1_positive},       {"b2_positive", k.b2_positive},
                       {"delta1_positive", k.delta1_positive}, {"delta2_positive", k.delta2_positive},
                       {"phi1_above_2", k.phi1_above_2},     {"phi2_above_2", k.phi2_above_2},
                       {"lambda1_nonneg", k.lambda1_nonneg}, {"lambda2_nonneg", k.lambda2_nonneg},
                       {"concave", k.concave},
                       {"assumption1", pol.assumption1},     {"assumption3", pol.assumption3}};
    j["at_optimum"] = {{"b_int", vec(d.b_int)}, {"delta", d.delta}, {"delta1", d.delta1},
                       {"delta2", d.delta2},    {"phi", vec(d.phi)}, {"L", vec(d.L)}};
    return j.dump(indent);
}

std::string to_json(const EnsembleStats& s, int indent) {
    json j;
    j["mean_path"] = {{"t", s.mean_path.t},
                      {"m1", column(s.mean_path.mean, 0)},
                      {"se1", column(s.mean_path.se, 0)},
                      {"m2", column(s.mean_path.mean, 1)},
                      {"se2", column(s.mean_path.se, 1)}};
    j["time_avg"] = {{"x1", summary(s.time_avg[0])}, {"x2", summary(s.time_avg[1])}};
    j["phase_means"] = phases(s.phase_means);
    j["empirical_yield"] = {{"est", s.empirical_yield.est}, {"se", s.empirical_yield.se}};
    const auto& c = s.config;
    j["config_echo"] = {{"n_paths", c.n_paths},
                        {"n_paths_ok", s.n_paths_ok},
                        {"failed_paths", s.failed_paths},
                        {"master_seed", c.master_seed},
                        {"dt", c.sim.dt},
                        {"t_end", c.sim.t_end},
                        {"x0", vec(c.sim.x0)},
                        {"scheme", std::string(to_string(c.sim.scheme))},
                        {"burn_in", c.burn_in},
                        {"harvest", vec(s.harvest.values())}};
    return j.dump(indent);
}

std::string to_json(const ConvergenceReport& r, int indent) {
    json j;
    j["t"] = r.t;
    j["gap1"] = column(r.gap, 0);
    j["gap2"] = column(r.gap, 1);
    j["gap_at_1"] = vec(r.gap_at_1);
    j["gap_final"] = vec(r.gap_final);
    j["decayed"] = r.decayed;
    j["log_slope"] = vec(r.log_slope);
    return j.dump(indent);
}

std::string to_json(const PeriodicityReport& r, int indent) {
    json j;
    j["phases"] = phases(r.phases);
    j["discrepancy1"] = column(r.discrepancy, 0);
    j["discrepancy2"] = column(r.discrepancy, 1);
    j["max_rel_discrepancy"] = r.max_rel_discrepancy;
    j["max_z"] = r.max_z;
    j["within_3se"] = r.within_3se;
    j["cycle_amplitude"] = vec(r.cycle_amplitude);
    j["assumption2"] = r.assumption2;
    return j.dump(indent);
}

void write_sensitivity_csv(std::ostream& os, const std::vector<SensitivityRow>& rows) {
    os << "scale,h1_star,h2_star,y_star,valid\n";
    for (const auto& r : rows)
        os << format_double(r.scale) << ',' << format_double(r.H_star[0]) << ','
           << format_double(r.H_star[1]) << ',' << format_double(r.Y_star) << ','
           << (r.valid ? "true" : "false") << '\n';
}

void write_surface_csv(std::ostream& os, const std::vector<SurfacePoint>& points) {
    os << "h1,h2,y\n";
    for (const auto& p : points)
        os << format_double(p.h1) << ',' << format_double(p.h2) << ',' << format_double(p.y) << '\n';
}

}  // namespace lvharvest
