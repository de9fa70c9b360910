#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lvharvest/classify.hpp"
#include "lvharvest/harvest.hpp"
#include "lvharvest/mc.hpp"

namespace lvharvest {

/// %.17g, i.e. lossless for doubles.
std::string format_double(double v);

std::string to_json(const RegimeReport& rep, const HarvestEffort& H, int indent = 2);
std::string to_json(const OptimalPolicy& pol, int indent = 2);

/// Keys: mean_path {t, m1, se1, m2, se2}, time_avg {x1, x2} each with
/// {mean, std, q05, q50, q95}, phase_means, empirical_yield {est, se},
/// config_echo.
std::string to_json(const EnsembleStats& stats, int indent = 2);

std::string to_json(const ConvergenceReport& rep, int indent = 2);
std::string to_json(const PeriodicityReport& rep, int indent = 2);

/// Header `scale,h1_star,h2_star,y_star,valid`.
void write_sensitivity_csv(std::ostream& os, const std::vector<SensitivityRow>& rows);

/// Header `h1,h2,y`.
void write_surface_csv(std::ostream& os, const std::vector<SurfacePoint>& points);

}  // namespace lvharvest
