#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lvharvest/classify.hpp"
#include "lvharvest/model.hpp"

namespace lvharvest {

/// Closed-form inverse of a 2x2 matrix. Throws AssumptionViolation on a
/// (numerically) singular competition matrix.
Matrix2 inverse(const Matrix2& c);

/// C^-1 + (C^-1)^T, the negated Hessian of the yield surface.
Matrix2 concavity_matrix(const Matrix2& c);

/// Eigenvalues of a symmetric 2x2 matrix, ascending.
Vec2 symmetric_eigenvalues(const Matrix2& s);

/// H^T C^-1 (L - H) without any regime check.
double yield_formula(const Matrix2& c, const Vec2& L, const HarvestEffort& H);

/// Gradient C^-1 L - (C^-1 + C^-T) H of yield_formula.
Vec2 yield_gradient(const Matrix2& c, const Vec2& L, const HarvestEffort& H);

/// Long-run expected yield H^T C^-1 (L - H). Only meaningful under
/// coexistence: throws RegimeError unless classify gives BothPersist, and
/// AssumptionViolation if Delta <= 0.
double yield_theoretical(const ModelParams& params, const HarvestEffort& H);

struct PolicyConditions {
    bool b1_positive = false;
    bool b2_positive = false;
    bool delta1_positive = false;
    bool delta2_positive = false;
    bool phi1_above_2 = false;
    bool phi2_above_2 = false;
    bool lambda1_nonneg = false;
    bool lambda2_nonneg = false;
    /// C^-1 + C^-T positive definite, so A is a maximum and not a saddle.
    /// Delta > 0 alone does not guarantee it; 4 c11 c22 > (c12 + c21)^2 does.
    bool concave = false;

    bool all() const {
        return b1_positive && b2_positive && delta1_positive && delta2_positive && phi1_above_2 &&
               phi2_above_2 && lambda1_nonneg && lambda2_nonneg && concave;
    }
};

struct OptimalPolicy {
    Vec2 H_star{};
    double Y_star = 0.0;
    PolicyConditions conditions;
    bool assumption1 = false;
    bool assumption3 = false;
    /// Every side condition holds; only then is H_star the optimal effort.
    bool valid = false;
    /// b-integrals, deltas and Phi evaluated at H = H_star.
    DerivedQuantities at_optimum;
};

/// Unconstrained stationary point A of the yield surface, obtained by
/// solving (C (C^-1)^T + I) A = L, with Y* = A^T C^-1 (L - A). Side
/// conditions failing gives valid == false, never an exception.
OptimalPolicy optimal_policy(const ModelParams& params);

struct GridOptimum {
    Vec2 H_best{};
    double Y_best = 0.0;
    std::size_t feasible_points = 0;
};

/// Brute force over {0, step, ..., h_max}^2 restricted to BothPersist
/// points. Ties go to the lexicographically smallest H. Throws
/// EmptyFeasible when no lattice point coexists.
GridOptimum grid_search_oracle(const ModelParams& params, double h_max, double step);
/// h_max = max(L1, L2), step = 0.01.
GridOptimum grid_search_oracle(const ModelParams& params);

struct SensitivityRow {
    double scale = 0.0;
    Vec2 H_star{};
    double Y_star = 0.0;
    bool valid = false;
    std::string error;  ///< non-empty when optimal_policy threw for this row
};

/// Re-solves the optimal policy with alpha_j replaced by scale * alpha_j.
std::vector<SensitivityRow> noise_sensitivity(const ModelParams& params, std::size_t j,
                                              const std::vector<double>& scales);

struct SurfacePoint {
    double h1 = 0.0;
    double h2 = 0.0;
    /// NaN outside BothPersist unless the surface was built formula-only.
    double y = 0.0;
};

std::vector<SurfacePoint> harvest_surface(const ModelParams& params, double h_max, double step,
                                          bool formula_only);

}  // namespace lvharvest
