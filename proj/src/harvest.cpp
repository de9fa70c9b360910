#include "lvharvest/harvest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lvharvest/errors.hpp"

namespace lvharvest {

Matrix2 inverse(const Matrix2& c) {
    const double d = determinant(c);
    const double scale =
        std::max({std::abs(c[0][0]), std::abs(c[0][1]), std::abs(c[1][0]), std::abs(c[1][1])});
    if (!(std::abs(d) > 1e-12 * scale)) throw AssumptionViolation("competition matrix is singular");
    return {{{c[1][1] / d, -c[0][1] / d}, {-c[1][0] / d, c[0][0] / d}}};
}

Matrix2 concavity_matrix(const Matrix2& c) {
    const Matrix2 ci = inverse(c);
    return {{{2.0 * ci[0][0], ci[0][1] + ci[1][0]}, {ci[1][0] + ci[0][1], 2.0 * ci[1][1]}}};
}

Vec2 symmetric_eigenvalues(const Matrix2& s) {
    const double mid = 0.5 * (s[0][0] + s[1][1]);
    const double half_diff = 0.5 * (s[0][0] - s[1][1]);
    const double rad = std::hypot(half_diff, s[0][1]);
    return {mid - rad, mid + rad};
}

double yield_formula(const Matrix2& c, const Vec2& L, const HarvestEffort& H) {
    const Matrix2 ci = inverse(c);
    const double g0 = L[0] - H[0], g1 = L[1] - H[1];
    return H[0] * (ci[0][0] * g0 + ci[0][1] * g1) + H[1] * (ci[1][0] * g0 + ci[1][1] * g1);
}

Vec2 yield_gradient(const Matrix2& c, const Vec2& L, const HarvestEffort& H) {
    const Matrix2 ci = inverse(c);
    const Matrix2 s = concavity_matrix(c);
    return {ci[0][0] * L[0] + ci[0][1] * L[1] - (s[0][0] * H[0] + s[0][1] * H[1]),
            ci[1][0] * L[0] + ci[1][1] * L[1] - (s[1][0] * H[0] + s[1][1] * H[1])};
}

double yield_theoretical(const ModelParams& params, const HarvestEffort& H) {
    validate(params);
    const PeriodAverages avg = period_averages(params);
    const RegimeReport rep = classify(avg, params.c, H);
    if (rep.regime != Regime::BothPersist)
        throw RegimeError("yield formula requires coexistence; regime is " +
                          std::string(to_string(rep.regime)));
    return yield_formula(params.c, L_vector(avg), H);
}

OptimalPolicy optimal_policy(const ModelParams& params) {
    validate(params);
    const Matrix2& c = params.c;
    require_positive_delta(c);
    const PeriodAverages avg = period_averages(params);
    const Vec2 L = L_vector(avg);

    // M = C (C^-1)^T + I, solved by Cramer's rule; det M = Delta * det(C^-1 + C^-T)
    const Matrix2 ci = inverse(c);
    const bool concave = symmetric_eigenvalues(concavity_matrix(c))[0] > 0.0;
    Matrix2 m{};
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            m[i][j] = c[i][0] * ci[j][0] + c[i][1] * ci[j][1] + (i == j ? 1.0 : 0.0);
    const double det_m = determinant(m);
    if (!(std::abs(det_m) > 1e-12 * std::max(1.0, std::abs(m[0][0]) + std::abs(m[1][1]))))
        throw AssumptionViolation("yield surface has no unique stationary point (C^-1 + C^-T singular)");
    const Vec2 A{(L[0] * m[1][1] - m[0][1] * L[1]) / det_m,
                 (m[0][0] * L[1] - m[1][0] * L[0]) / det_m};

    OptimalPolicy pol;
    pol.H_star = A;
    const double g0 = L[0] - A[0], g1 = L[1] - A[1];
    pol.Y_star = A[0] * (ci[0][0] * g0 + ci[0][1] * g1) + A[1] * (ci[1][0] * g0 + ci[1][1] * g1);

    auto& k = pol.conditions;
    k.lambda1_nonneg = A[0] >= 0.0;
    k.lambda2_nonneg = A[1] >= 0.0;
    k.concave = concave;
    pol.assumption1 = determinant(c) > 0.0;
    pol.assumption3 = c[0][0] > c[1][0] && c[1][1] > c[0][1];

    // H must be a valid effort to evaluate the side conditions; clamp only for that purpose
    const HarvestEffort at(std::max(A[0], 0.0), std::max(A[1], 0.0));
    if (k.lambda1_nonneg && k.lambda2_nonneg) {
        const DerivedQuantities d = derive(avg, c, at);
        pol.at_optimum = d;
        k.b1_positive = d.b_int[0] > 0.0;
        k.b2_positive = d.b_int[1] > 0.0;
        k.delta1_positive = d.delta1 > 0.0;
        k.delta2_positive = d.delta2 > 0.0;
        k.phi1_above_2 = d.phi[0] > 2.0;
        k.phi2_above_2 = d.phi[1] > 2.0;
    } else {
        pol.at_optimum = derive(avg, c, at);
    }
    pol.valid = k.all() && pol.assumption1 && pol.assumption3;
    return pol;
}

GridOptimum grid_search_oracle(const ModelParams& params, double h_max, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("step must be > 0");
    if (!(h_max >= 0.0)) throw std::invalid_argument("h_max must be >= 0");
    validate(params);
    require_positive_delta(params.c);
    const PeriodAverages avg = period_averages(params);
    const Vec2 L = L_vector(avg);
    const auto n = static_cast<std::size_t>(std::floor(h_max / step + 1e-9)) + 1;

    GridOptimum best;
    best.Y_best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const HarvestEffort H(static_cast<double>(i) * step, static_cast<double>(j) * step);
            if (classify(avg, params.c, H).regime != Regime::BothPersist) continue;
            ++best.feasible_points;
            const double y = yield_formula(params.c, L, H);
            // row-major scan: strict improvement keeps the lexicographically smallest tie
            if (y > best.Y_best) {
                best.Y_best = y;
                best.H_best = H.values();
            }
        }
    }
    if (best.feasible_points == 0) throw EmptyFeasible("no lattice point lies in the coexistence regime");
    return best;
}

GridOptimum grid_search_oracle(const ModelParams& params) {
    const Vec2 L = L_vector(params);
    return grid_search_oracle(params, std::max({L[0], L[1], 0.0}), 0.01);
}

std::vector<SensitivityRow> noise_sensitivity(const ModelParams& params, std::size_t j,
                                              const std::vector<double>& scales) {
    if (j > 1) throw std::out_of_range("species index must be 0 or 1");
    std::vector<SensitivityRow> rows;
    rows.reserve(scales.size());
    for (const double s : scales) {
        SensitivityRow row;
        row.scale = s;
        ModelParams p = params;
        p.alpha[j] = params.alpha[j].scaled(s);
        try {
            const OptimalPolicy pol = optimal_policy(p);
            row.H_star = pol.H_star;
            row.Y_star = pol.Y_star;
            row.valid = pol.valid;
        } catch (const Error& e) {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            row.H_star = {nan, nan};
            row.Y_star = nan;
            row.valid = false;
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<SurfacePoint> harvest_surface(const ModelParams& params, double h_max, double step,
                                          bool formula_only) {
    if (!(step > 0.0)) throw std::invalid_argument("step must be > 0");
    if (!(h_max >= 0.0)) throw std::invalid_argument("h_max must be >= 0");
    validate(params);
    require_positive_delta(params.c);
    const PeriodAverages avg = period_averages(params);
    const Vec2 L = L_vector(avg);
    const auto n = static_cast<std::size_t>(std::floor(h_max / step + 1e-9)) + 1;

    std::vector<SurfacePoint> out;
    out.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const HarvestEffort H(static_cast<double>(i) * step, static_cast<double>(j) * step);
            double y = std::numeric_limits<double>::quiet_NaN();
            if (formula_only || classify(avg, params.c, H).regime == Regime::BothPersist)
                y = yield_formula(params.c, L, H);
            out.push_back({H[0], H[1], y});
        }
    }
    return out;
}

}  // namespace lvharvest
