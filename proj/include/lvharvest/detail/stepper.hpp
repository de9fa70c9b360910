#pragma once

// Shared stepping kernel for single paths (sde) and ensembles (mc).

#include <cfloat>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lvharvest/errors.hpp"
#include "lvharvest/model.hpp"
#include "lvharvest/sde.hpp"

namespace lvharvest::detail {

struct StepCoefficients {
    Vec2 rate{};      ///< r_i(t_k) - h_i
    Vec2 alpha{};     ///< alpha_i(t_k)
    Vec2 log_rate{};  ///< r_i(t_k) - h_i - alpha_i(t_k)^2 / 2
};

/// Coefficients at t_k = k * dt. When 1/dt is an integer the values for one
/// period are tabulated once and reused.
class CoefficientSchedule {
public:
    CoefficientSchedule(const ModelParams& params, const HarvestEffort& H, double dt)
        : params_(&params), h_(H.values()), dt_(dt) {
        const double per = 1.0 / dt;
        const double n = std::round(per);
        if (n >= 1.0 && n <= 1e7 && std::abs(per - n) <= 1e-9 * n) {
            period_.resize(static_cast<std::size_t>(n));
            for (std::size_t k = 0; k < period_.size(); ++k) period_[k] = compute(k);
        }
    }

    StepCoefficients at(std::size_t k) const {
        if (!period_.empty()) return period_[k % period_.size()];
        return compute(k);
    }

private:
    StepCoefficients compute(std::size_t k) const {
        const double t = static_cast<double>(k) * dt_;
        StepCoefficients s;
        for (std::size_t i = 0; i < 2; ++i) {
            const double a = params_->alpha[i](t);
            s.rate[i] = params_->r[i](t) - h_[i];
            s.alpha[i] = a;
            s.log_rate[i] = s.rate[i] - 0.5 * a * a;
        }
        return s;
    }

    const ModelParams* params_;
    Vec2 h_;
    double dt_;
    std::vector<StepCoefficients> period_;
};

/// Independent standard-normal streams for the two species.
class GaussianNoise {
public:
    GaussianNoise(std::uint64_t seed, double dt)
        : engines_{std::mt19937_64(split_seed(seed, 0)), std::mt19937_64(split_seed(seed, 1))},
          sqrt_dt_(std::sqrt(dt)) {}

    Vec2 operator()(std::size_t /*step*/) {
        return {sqrt_dt_ * normals_[0](engines_[0]), sqrt_dt_ * normals_[1](engines_[1])};
    }

private:
    std::mt19937_64 engines_[2];
    std::normal_distribution<double> normals_[2];
    double sqrt_dt_;
};

/// Integrates `steps` steps, calling observer(k, x, lnx) for k = 0..steps.
/// `lnx` is meaningful for LogEM only. Throws NonFinite with the step index.
template <class Noise, class Observer>
void integrate(const ModelParams& params, const CoefficientSchedule& coeffs, const SimConfig& cfg,
               std::size_t steps, Noise&& noise, Observer&& observer) {
    const auto& c = params.c;
    const double dt = cfg.dt;
    Vec2 x = cfg.x0;
    Vec2 lnx{std::log(x[0]), std::log(x[1])};
    observer(std::size_t{0}, x, lnx);

    for (std::size_t k = 0; k < steps; ++k) {
        const StepCoefficients s = coeffs.at(k);
        const Vec2 dW = noise(k);
        const Vec2 crowd{c[0][0] * x[0] + c[0][1] * x[1], c[1][0] * x[0] + c[1][1] * x[1]};
        if (cfg.scheme == Scheme::LogEM) {
            for (std::size_t i = 0; i < 2; ++i) {
                lnx[i] += (s.log_rate[i] - crowd[i]) * dt + s.alpha[i] * dW[i];
                if (!std::isfinite(lnx[i]))
                    throw NonFinite("non-finite state at step " + std::to_string(k + 1), k + 1);
                x[i] = std::max(std::exp(lnx[i]), DBL_MIN);
            }
        } else {
            Vec2 next;
            for (std::size_t i = 0; i < 2; ++i) {
                next[i] = x[i] + x[i] * (s.rate[i] - crowd[i]) * dt + s.alpha[i] * x[i] * dW[i];
                if (!std::isfinite(next[i]))
                    throw NonFinite("non-finite state at step " + std::to_string(k + 1), k + 1);
                // zero is absorbing; positive components are clamped at the floor
                if (x[i] > 0.0 && next[i] < cfg.floor) next[i] = cfg.floor;
            }
            x = next;
        }
        observer(k + 1, x, lnx);
    }
}

}  // namespace lvharvest::detail
