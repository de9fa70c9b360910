#include "lvharvest/periodic_fn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lvharvest {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap(double t) {
    double w = t - std::floor(t);
    // floor can round t - floor(t) up to exactly 1 for tiny negative t
    return w >= 1.0 ? 0.0 : w;
}

double eval_term(const Harmonic& h, double t) {
    const double arg = kTwoPi * h.k * t + h.phase;
    return h.amplitude * (h.kind == HarmonicKind::Sine ? std::sin(arg) : std::cos(arg));
}

double eval_table(const std::vector<Sample>& table, double t) {
    if (table.size() == 1) return table.front().value;
    auto upper = std::upper_bound(table.begin(), table.end(), t,
                                  [](double x, const Sample& s) { return x < s.t; });
    const Sample* lo;
    const Sample* hi;
    double t_lo, t_hi;
    if (upper == table.begin() || upper == table.end()) {
        // seam segment between the last sample and the first one shifted by 1
        lo = &table.back();
        hi = &table.front();
        t_lo = lo->t;
        t_hi = hi->t + 1.0;
        if (t < table.front().t) t += 1.0;
    } else {
        hi = &*upper;
        lo = &*(upper - 1);
        t_lo = lo->t;
        t_hi = hi->t;
    }
    const double w = (t - t_lo) / (t_hi - t_lo);
    return lo->value + w * (hi->value - lo->value);
}

// cos form of a term: amplitude * cos(2 pi k t + phase')
Harmonic as_cosine(const Harmonic& h) {
    Harmonic c = h;
    if (h.kind == HarmonicKind::Sine) c.phase -= std::numbers::pi / 2.0;
    c.kind = HarmonicKind::Cosine;
    return c;
}

}  // namespace

PeriodicFn PeriodicFn::constant(double c) {
    PeriodicFn f;
    f.constant_ = c;
    return f;
}

PeriodicFn PeriodicFn::harmonic(double c, std::vector<Harmonic> terms) {
    for (const auto& h : terms) {
        if (h.k <= 0) throw std::invalid_argument("harmonic frequency index must be positive");
        if (!std::isfinite(h.amplitude) || !std::isfinite(h.phase))
            throw std::invalid_argument("harmonic amplitude and phase must be finite");
    }
    if (!std::isfinite(c)) throw std::invalid_argument("constant term must be finite");
    PeriodicFn f;
    f.constant_ = c;
    f.harmonics_ = std::move(terms);
    return f;
}

PeriodicFn PeriodicFn::tabulated(std::vector<Sample> samples) {
    if (samples.empty()) throw std::invalid_argument("table needs at least one sample");
    std::sort(samples.begin(), samples.end(),
              [](const Sample& a, const Sample& b) { return a.t < b.t; });
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        if (!(s.t >= 0.0 && s.t < 1.0)) throw std::invalid_argument("table times must lie in [0,1)");
        if (!std::isfinite(s.value)) throw std::invalid_argument("table values must be finite");
        if (i > 0 && samples[i - 1].t == s.t)
            throw std::invalid_argument("table times must be distinct");
    }
    PeriodicFn f;
    f.table_ = std::move(samples);
    return f;
}

double PeriodicFn::operator()(double t) const {
    const double u = wrap(t);
    if (!table_.empty()) return eval_table(table_, u);
    double v = constant_;
    for (const auto& h : harmonics_) v += eval_term(h, u);
    return v;
}

PeriodicFn PeriodicFn::scaled(double s) const {
    PeriodicFn g = *this;
    g.constant_ *= s;
    for (auto& h : g.harmonics_) h.amplitude *= s;
    for (auto& p : g.table_) p.value *= s;
    return g;
}

double eval(const PeriodicFn& f, double t) { return f(t); }

double simpson_mean(const PeriodicFn& f, std::size_t panels) {
    if (panels < 2) panels = 2;
    if (panels % 2 != 0) ++panels;
    const double h = 1.0 / static_cast<double>(panels);
    double odd = 0.0, even = 0.0;
    for (std::size_t i = 1; i < panels; ++i) {
        const double v = f(h * static_cast<double>(i));
        (i % 2 == 1 ? odd : even) += v;
    }
    // f(0) == f(1) by periodicity
    const double ends = 2.0 * f(0.0);
    return h / 3.0 * (ends + 4.0 * odd + 2.0 * even);
}

double mean_over_period(const PeriodicFn& f, std::size_t panels) {
    if (!f.is_table()) return f.constant_term();
    return simpson_mean(f, panels);
}

double sup_over_period(const PeriodicFn& f, std::size_t samples) {
    if (!f.is_table() && f.harmonics().empty()) return f.constant_term();
    if (samples < 4) samples = 4;
    const double step = 1.0 / static_cast<double>(samples);
    double best_t = 0.0;
    double best = f(0.0);
    for (std::size_t i = 1; i < samples; ++i) {
        const double t = step * static_cast<double>(i);
        const double v = f(t);
        if (v > best) {
            best = v;
            best_t = t;
        }
    }

    // golden-section on [best_t - step, best_t + step]; f is evaluated with wrap
    constexpr double inv_phi = 0.6180339887498949;
    double a = best_t - step, b = best_t + step;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 200 && (b - a) > 1e-13; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    best = std::max({best, fc, fd, f(0.5 * (a + b))});

    if (f.is_table()) {
        // the interpolant attains its maximum at a node
        for (const auto& s : f.table()) best = std::max(best, s.value);
    }
    return best;
}

PeriodicFn pointwise_square(const PeriodicFn& f) {
    if (f.is_table()) {
        std::vector<Sample> sq = f.table();
        for (auto& s : sq) s.value *= s.value;
        return PeriodicFn::tabulated(std::move(sq));
    }
    const double c = f.constant_term();
    std::vector<Harmonic> terms;
    double constant = c * c;
    std::vector<Harmonic> cos_terms;
    cos_terms.reserve(f.harmonics().size());
    for (const auto& h : f.harmonics()) cos_terms.push_back(as_cosine(h));

    for (const auto& h : cos_terms) {
        if (c != 0.0) terms.push_back({2.0 * c * h.amplitude, h.k, h.phase, HarmonicKind::Cosine});
    }
    // a cos(x) * b cos(y) = ab/2 [cos(x - y) + cos(x + y)]
    for (std::size_t i = 0; i < cos_terms.size(); ++i) {
        for (std::size_t j = 0; j < cos_terms.size(); ++j) {
            const auto& p = cos_terms[i];
            const auto& q = cos_terms[j];
            const double half = 0.5 * p.amplitude * q.amplitude;
            terms.push_back({half, p.k + q.k, p.phase + q.phase, HarmonicKind::Cosine});
            const int dk = p.k - q.k;
            if (dk == 0) {
                constant += half * std::cos(p.phase - q.phase);
            } else if (dk > 0) {
                terms.push_back({half, dk, p.phase - q.phase, HarmonicKind::Cosine});
            } else {
                terms.push_back({half, -dk, q.phase - p.phase, HarmonicKind::Cosine});
            }
        }
    }
    return PeriodicFn::harmonic(constant, std::move(terms));
}

}  // namespace lvharvest
