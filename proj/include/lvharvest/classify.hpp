#pragma once

#include <optional>
#include <string_view>

#include "lvharvest/model.hpp"

namespace lvharvest {

enum class Regime { BothExtinct, X1PersistsX2Extinct, X2PersistsX1Extinct, BothPersist, Indeterminate };

std::string_view to_string(Regime r);

struct AssumptionFlags {
    bool a1 = false;  ///< Delta > 0
    bool h1 = false;  ///< both b-integrals > 0
    bool h2 = false;  ///< Phi_1 > 2 and Phi_2 > 2
    bool a3 = false;  ///< c11 > c21 and c22 > c12
    bool operator==(const AssumptionFlags&) const = default;
};

struct Margins {
    double b1 = 0.0;
    double b2 = 0.0;
    double delta1 = 0.0;
    double delta2 = 0.0;
};

struct RegimeReport {
    Regime regime = Regime::Indeterminate;
    /// Almost-sure limits of (1/t) * integral of x_i; absent when Indeterminate.
    std::optional<Vec2> predicted_averages;
    AssumptionFlags assumptions;
    Margins margins;
    double delta = 0.0;
};

inline constexpr double kDefaultClassifyTol = 1e-9;

/// Throws AssumptionViolation unless Delta > 0 and C is not numerically
/// singular (|Delta| > 1e-12 * max|c_ij|).
void require_positive_delta(const Matrix2& c);

AssumptionFlags check_assumptions(const ModelParams& params, const HarvestEffort& H);
AssumptionFlags check_assumptions(const PeriodAverages& avg, const Matrix2& c,
                                  const HarvestEffort& H);

/// Sign-table classification of the long-run regime. Signs of the two
/// b-integrals are checked first; only when both are positive do Delta_1
/// and Delta_2 decide. Any decisive quantity within `tol` of zero yields
/// Indeterminate.
RegimeReport classify(const ModelParams& params, const HarvestEffort& H,
                      double tol = kDefaultClassifyTol);
RegimeReport classify(const PeriodAverages& avg, const Matrix2& c, const HarvestEffort& H,
                      double tol = kDefaultClassifyTol);

}  // namespace lvharvest
