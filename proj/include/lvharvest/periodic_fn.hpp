#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace lvharvest {

enum class HarmonicKind { Sine, Cosine };

/// One term amplitude * sin|cos(2*pi*k*t + phase).
struct Harmonic {
    double amplitude = 0.0;
    int k = 1;
    double phase = 0.0;
    HarmonicKind kind = HarmonicKind::Sine;

    bool operator==(const Harmonic&) const = default;
};

/// A tabulated sample (t in [0,1), value).
struct Sample {
    double t = 0.0;
    double value = 0.0;

    bool operator==(const Sample&) const = default;
};

/// Continuous 1-periodic real function.
///
/// Either a constant plus a finite harmonic sum, or a table of samples with
/// linear interpolation and periodic wrap. Immutable after construction.
class PeriodicFn {
public:
    PeriodicFn() = default;

    static PeriodicFn constant(double c);
    static PeriodicFn harmonic(double c, std::vector<Harmonic> terms);
    /// Samples are sorted by t; t must lie in [0,1) and be distinct.
    static PeriodicFn tabulated(std::vector<Sample> samples);

    double operator()(double t) const;

    bool is_table() const noexcept { return !table_.empty(); }
    double constant_term() const noexcept { return constant_; }
    const std::vector<Harmonic>& harmonics() const noexcept { return harmonics_; }
    const std::vector<Sample>& table() const noexcept { return table_; }

    /// Multiplies every value by s (constant, amplitudes, or table values).
    PeriodicFn scaled(double s) const;

    bool operator==(const PeriodicFn&) const = default;

private:
    double constant_ = 0.0;
    std::vector<Harmonic> harmonics_;
    std::vector<Sample> table_;
};

inline constexpr std::size_t kDefaultQuadraturePanels = 1024;
inline constexpr std::size_t kDefaultSupSamples = 4096;

double eval(const PeriodicFn& f, double t);

/// Integral over one period. Harmonic inputs take the exact fast path and
/// return the constant term; tables go through simpson_mean.
double mean_over_period(const PeriodicFn& f, std::size_t panels = kDefaultQuadraturePanels);

/// Composite Simpson over [0,1] regardless of representation. `panels` is
/// rounded up to an even number.
double simpson_mean(const PeriodicFn& f, std::size_t panels = kDefaultQuadraturePanels);

/// Maximum over one period: dense sampling, then golden-section refinement
/// around the best sample. Absolute accuracy <= 1e-8 for harmonic inputs.
double sup_over_period(const PeriodicFn& f, std::size_t samples = kDefaultSupSamples);

/// g(t) = f(t)^2.
///
/// Harmonic inputs are expanded with product-to-sum identities, so the
/// result is again a harmonic sum (cosine terms, frequencies up to 2k) and
/// agrees with f^2 everywhere up to rounding. Tables are squared at their
/// nodes; between nodes the result interpolates the squared samples.
PeriodicFn pointwise_square(const PeriodicFn& f);

}  // namespace lvharvest
