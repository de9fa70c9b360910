#include "lvharvest/model.hpp"

#include <cmath>
#include <string>

#include "lvharvest/errors.hpp"

namespace lvharvest {

namespace {

void check_index(std::size_t i) {
    if (i > 1) throw std::out_of_range("species index must be 0 or 1");
}

}  // namespace

void validate(const ModelParams& params) {
    const auto& c = params.c;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            if (!std::isfinite(c[i][j]))
                throw ValidationError("c" + std::to_string(i + 1) + std::to_string(j + 1) +
                                      " must be finite");
    if (!(c[0][0] > 0.0)) throw ValidationError("c11 must be > 0");
    if (!(c[1][1] > 0.0)) throw ValidationError("c22 must be > 0");
    if (!(c[0][1] >= 0.0)) throw ValidationError("c12 must be >= 0");
    if (!(c[1][0] >= 0.0)) throw ValidationError("c21 must be >= 0");
}

HarvestEffort::HarvestEffort(double h1, double h2) : h_{h1, h2} {
    if (!(h1 >= 0.0) || !std::isfinite(h1)) throw ValidationError("h1 must be finite and >= 0");
    if (!(h2 >= 0.0) || !std::isfinite(h2)) throw ValidationError("h2 must be finite and >= 0");
}

PeriodAverages period_averages(const ModelParams& params) {
    PeriodAverages avg;
    for (std::size_t i = 0; i < 2; ++i) {
        avg.r_mean[i] = mean_over_period(params.r[i]);
        avg.alpha_sq_mean[i] = mean_over_period(pointwise_square(params.alpha[i]));
        avg.r_sup[i] = sup_over_period(params.r[i]);
    }
    return avg;
}

double determinant(const Matrix2& c) { return c[0][0] * c[1][1] - c[1][0] * c[0][1]; }

Vec2 L_vector(const PeriodAverages& avg) {
    return {avg.r_mean[0] - 0.5 * avg.alpha_sq_mean[0], avg.r_mean[1] - 0.5 * avg.alpha_sq_mean[1]};
}

Vec2 L_vector(const ModelParams& params) { return L_vector(period_averages(params)); }

Vec2 b_integrals(const PeriodAverages& avg, const HarvestEffort& H) {
    const Vec2 L = L_vector(avg);
    return {L[0] - H[0], L[1] - H[1]};
}

double b_integral(const ModelParams& params, const HarvestEffort& H, std::size_t i) {
    check_index(i);
    return mean_over_period(params.r[i]) - H[i] -
           0.5 * mean_over_period(pointwise_square(params.alpha[i]));
}

Deltas deltas(const Matrix2& c, const Vec2& b) {
    return {determinant(c), c[1][1] * b[0] - c[0][1] * b[1], c[0][0] * b[1] - c[1][0] * b[0]};
}

Deltas deltas(const ModelParams& params, const HarvestEffort& H) {
    return deltas(params.c, b_integrals(period_averages(params), H));
}

double phi(const PeriodAverages& avg, const Matrix2& c, const HarvestEffort& H, std::size_t m) {
    check_index(m);
    const std::size_t n = 1 - m;
    const Vec2 b = b_integrals(avg, H);
    const double q = avg.r_sup[m] - H[m] + c[m][m] + c[n][m];
    return b[0] + b[1] - q * q / (4.0 * c[m][m]);
}

double phi(const ModelParams& params, const HarvestEffort& H, std::size_t m) {
    return phi(period_averages(params), params.c, H, m);
}

DerivedQuantities derive(const PeriodAverages& avg, const Matrix2& c, const HarvestEffort& H) {
    DerivedQuantities d;
    d.L = L_vector(avg);
    d.b_int = b_integrals(avg, H);
    const Deltas ds = deltas(c, d.b_int);
    d.delta = ds.delta;
    d.delta1 = ds.delta1;
    d.delta2 = ds.delta2;
    d.phi = {phi(avg, c, H, 0), phi(avg, c, H, 1)};
    return d;
}

DerivedQuantities derive(const ModelParams& params, const HarvestEffort& H) {
    return derive(period_averages(params), params.c, H);
}

DriftDiffusion drift_diffusion(const ModelParams& params, const HarvestEffort& H, const Vec2& x,
                               double t) {
    DriftDiffusion out;
    const auto& c = params.c;
    for (std::size_t i = 0; i < 2; ++i) {
        const double rate = params.r[i](t) - H[i] - c[i][0] * x[0] - c[i][1] * x[1];
        out.drift[i] = x[i] * rate;
        out.diffusion[i] = params.alpha[i](t) * x[i];
    }
    return out;
}

}  // namespace lvharvest
