#pragma once

#include <array>
#include <cstddef>

#include "lvharvest/periodic_fn.hpp"

namespace lvharvest {

using Vec2 = std::array<double, 2>;
/// Row-major 2x2 matrix, m[i][j].
using Matrix2 = std::array<Vec2, 2>;

/// Parameters of the two-species stochastic competition model
///
///   dx_i = x_i [r_i(t) - h_i - sum_j c_ij x_j] dt + alpha_i(t) x_i dB_i.
///
/// `c` holds the competition coefficients with c[0][0], c[1][1] > 0 and
/// non-negative off-diagonal entries.
struct ModelParams {
    std::array<PeriodicFn, 2> r;
    std::array<PeriodicFn, 2> alpha;
    Matrix2 c{};

    bool operator==(const ModelParams&) const = default;
};

/// Throws ValidationError naming the violated constraint.
void validate(const ModelParams& params);

/// Per-capita harvesting efforts (h1, h2), both >= 0.
class HarvestEffort {
public:
    HarvestEffort() = default;
    HarvestEffort(double h1, double h2);
    explicit HarvestEffort(const Vec2& h) : HarvestEffort(h[0], h[1]) {}

    double operator[](std::size_t i) const { return h_[i]; }
    const Vec2& values() const noexcept { return h_; }

    bool operator==(const HarvestEffort&) const = default;

private:
    Vec2 h_{0.0, 0.0};
};

/// Period statistics of the coefficient functions. Everything downstream
/// (b-integrals, deltas, Phi, L) is a cheap function of these.
struct PeriodAverages {
    Vec2 r_mean{};
    Vec2 alpha_sq_mean{};
    Vec2 r_sup{};
};

PeriodAverages period_averages(const ModelParams& params);

struct Deltas {
    double delta = 0.0;   ///< c11 c22 - c21 c12
    double delta1 = 0.0;  ///< c22 b1 - c12 b2
    double delta2 = 0.0;  ///< c11 b2 - c21 b1
};

struct DerivedQuantities {
    Vec2 b_int{};
    double delta = 0.0;
    double delta1 = 0.0;
    double delta2 = 0.0;
    Vec2 phi{};
    Vec2 L{};
};

double determinant(const Matrix2& c);

/// Mean over one period of b_i(t) = r_i(t) - h_i - alpha_i(t)^2 / 2.
double b_integral(const ModelParams& params, const HarvestEffort& H, std::size_t i);
Vec2 b_integrals(const PeriodAverages& avg, const HarvestEffort& H);

Deltas deltas(const ModelParams& params, const HarvestEffort& H);
Deltas deltas(const Matrix2& c, const Vec2& b_int);

/// Phi_m = b1 + b2 - (r_m^u - h_m + c_mm + c_nm)^2 / (4 c_mm), n the other index.
double phi(const ModelParams& params, const HarvestEffort& H, std::size_t m);
double phi(const PeriodAverages& avg, const Matrix2& c, const HarvestEffort& H, std::size_t m);

/// L_i = mean(r_i) - mean(alpha_i^2) / 2, so that L_i - h_i = b_i.
Vec2 L_vector(const ModelParams& params);
Vec2 L_vector(const PeriodAverages& avg);

DerivedQuantities derive(const ModelParams& params, const HarvestEffort& H);
DerivedQuantities derive(const PeriodAverages& avg, const Matrix2& c, const HarvestEffort& H);

struct DriftDiffusion {
    Vec2 drift{};
    Vec2 diffusion{};
};

DriftDiffusion drift_diffusion(const ModelParams& params, const HarvestEffort& H, const Vec2& x,
                               double t);

}  // namespace lvharvest
