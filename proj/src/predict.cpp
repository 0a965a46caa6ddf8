#include "evt/predict.hpp"

#include <cmath>
#include <limits>

#include "evt/errors.hpp"
#include "evt/quadrature.hpp"

namespace evt {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log of f1(x1+s) f2(x2+s) e^s, optionally times the third-component
// survival at (shift + s). The numerator and denominator of the
// conditional ratio both go through here so they share the quadrature
// scheme and bracket logic.
double log_marginal_pair_integral(const GeneratorFamily& f, double x1, double x2,
                                  bool with_survival, double shift) {
    auto logf = [&](double s) {
        const double l1 = marginal_log_pdf(f, 0, x1 + s);
        if (l1 == kNegInf) return kNegInf;
        const double l2 = marginal_log_pdf(f, 1, x2 + s);
        if (l2 == kNegInf) return kNegInf;
        double acc = l1 + l2 + s;
        if (with_survival) {
            const double q = marginal_survival(f, 2, shift + s);
            if (q <= 0.0) return kNegInf;
            acc += std::log(q);
        }
        return acc;
    };
    return log_integrate_line(logf);
}

}  // namespace

double conditional_exceedance(const MvGpModel& model, double x1, double x2, double v3) {
    if (!std::isfinite(v3)) throw DomainError("conditional_exceedance: v3 must be finite");
    const GeneratorFamily& f = model.family;
    f.validate();

    const bool conditioning_positive = x1 > 0.0 || x2 > 0.0;
    if (!conditioning_positive && v3 <= 0.0) return 1.0;  // positivity must come from X3

    // Numerator: x3 restricted to (max(v3, 0), inf) when the support
    // indicator binds, (v3, inf) otherwise.
    const double num_shift = conditioning_positive ? v3 : std::max(v3, 0.0);
    const double log_num = log_marginal_pair_integral(f, x1, x2, true, num_shift);

    double log_den;
    if (conditioning_positive) {
        log_den = log_marginal_pair_integral(f, x1, x2, false, 0.0);
    } else {
        log_den = log_marginal_pair_integral(f, x1, x2, true, 0.0);
    }
    if (log_den == kNegInf) throw NumericError("conditional_exceedance: degenerate denominator");
    if (log_num == kNegInf) return 0.0;

    const double p = std::exp(log_num - log_den);
    if (p > 1.0 + 1e-6)
        throw NumericError("conditional_exceedance: probability overshoot " + std::to_string(p));
    return std::min(1.0, std::max(0.0, p));
}

double predict_level(const MvGpModel& model, const PredictionQuery& query) {
    // Levels at or below the third threshold are allowed: v3 <= 0 simply
    // conditions on less, and the tail model still applies through the
    // positive-excess support of the conditioning pair.
    if (query.below_threshold_prob < 0.0 || query.below_threshold_prob > 1.0)
        throw DomainError("predict_level: below_threshold_prob outside [0,1]");

    const double x1 = (query.y1 - model.thresholds[0]) / model.marginal_scales[0];
    const double x2 = (query.y2 - model.thresholds[1]) / model.marginal_scales[1];
    const double v3 = (query.level - model.thresholds[2]) / model.marginal_scales[2];

    const double p = conditional_exceedance(model, x1, x2, v3);
    if (x1 > 0.0 || x2 > 0.0) return p;
    return p * query.below_threshold_prob;
}

double below_threshold_prob(const std::vector<Vec3>& history, const Vec3& thresholds) {
    int qualifying = 0, exceeding = 0;
    for (const auto& y : history) {
        if (y[0] <= thresholds[0] && y[1] <= thresholds[1]) {
            ++qualifying;
            if (y[2] > thresholds[2]) ++exceeding;
        }
    }
    if (qualifying == 0)
        throw DomainError("below_threshold_prob: no historical epidemic with both early components below threshold");
    return static_cast<double>(exceeding) / static_cast<double>(qualifying);
}

}  // namespace evt
