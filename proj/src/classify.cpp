#include "lvharvest/classify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lvharvest/errors.hpp"

namespace lvharvest {

std::string_view to_string(Regime r) {
    switch (r) {
        case Regime::BothExtinct: return "BothExtinct";
        case Regime::X1PersistsX2Extinct: return "X1PersistsX2Extinct";
        case Regime::X2PersistsX1Extinct: return "X2PersistsX1Extinct";
        case Regime::BothPersist: return "BothPersist";
        case Regime::Indeterminate: return "Indeterminate";
    }
    return "Indeterminate";
}

void require_positive_delta(const Matrix2& c) {
    const double d = determinant(c);
    const double scale =
        std::max({std::abs(c[0][0]), std::abs(c[0][1]), std::abs(c[1][0]), std::abs(c[1][1])});
    if (!(d > 0.0)) throw AssumptionViolation("Delta = c11*c22 - c21*c12 must be > 0");
    if (!(d > 1e-12 * scale)) throw AssumptionViolation("competition matrix is numerically singular");
}

AssumptionFlags check_assumptions(const PeriodAverages& avg, const Matrix2& c,
                                  const HarvestEffort& H) {
    const DerivedQuantities d = derive(avg, c, H);
    AssumptionFlags f;
    f.a1 = d.delta > 0.0;
    f.h1 = d.b_int[0] > 0.0 && d.b_int[1] > 0.0;
    f.h2 = d.phi[0] > 2.0 && d.phi[1] > 2.0;
    f.a3 = c[0][0] > c[1][0] && c[1][1] > c[0][1];
    return f;
}

AssumptionFlags check_assumptions(const ModelParams& params, const HarvestEffort& H) {
    return check_assumptions(period_averages(params), params.c, H);
}

RegimeReport classify(const PeriodAverages& avg, const Matrix2& c, const HarvestEffort& H,
                      double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
    require_positive_delta(c);

    const DerivedQuantities d = derive(avg, c, H);
    RegimeReport rep;
    rep.delta = d.delta;
    rep.margins = {d.b_int[0], d.b_int[1], d.delta1, d.delta2};
    rep.assumptions = check_assumptions(avg, c, H);

    const double b1 = d.b_int[0], b2 = d.b_int[1];
    if (std::abs(b1) <= tol || std::abs(b2) <= tol) return rep;

    if (b1 < 0.0 && b2 < 0.0) {
        rep.regime = Regime::BothExtinct;
        rep.predicted_averages = Vec2{0.0, 0.0};
    } else if (b1 > 0.0 && b2 < 0.0) {
        rep.regime = Regime::X1PersistsX2Extinct;
        rep.predicted_averages = Vec2{b1 / c[0][0], 0.0};
    } else if (b1 < 0.0 && b2 > 0.0) {
        rep.regime = Regime::X2PersistsX1Extinct;
        rep.predicted_averages = Vec2{0.0, b2 / c[1][1]};
    } else {
        if (std::abs(d.delta1) <= tol || std::abs(d.delta2) <= tol) return rep;
        if (d.delta1 > 0.0 && d.delta2 < 0.0) {
            rep.regime = Regime::X1PersistsX2Extinct;
            rep.predicted_averages = Vec2{b1 / c[0][0], 0.0};
        } else if (d.delta1 < 0.0 && d.delta2 > 0.0) {
            rep.regime = Regime::X2PersistsX1Extinct;
            rep.predicted_averages = Vec2{0.0, b2 / c[1][1]};
        } else if (d.delta1 > 0.0 && d.delta2 > 0.0) {
            rep.regime = Regime::BothPersist;
            rep.predicted_averages = Vec2{d.delta1 / d.delta, d.delta2 / d.delta};
        }
        // (-,-) cannot occur with positive b-integrals and Delta > 0
    }
    return rep;
}

RegimeReport classify(const ModelParams& params, const HarvestEffort& H, double tol) {
    return classify(period_averages(params), params.c, H, tol);
}

}  // namespace lvharvest
