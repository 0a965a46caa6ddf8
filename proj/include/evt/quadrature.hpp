#pragma once

#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace evt {

// Integral over the real line of exp(L(s)) for a unimodal log-integrand L,
// returned as log of the integral. The peak is located by grid search plus
// golden refinement, the bracket expanded until the integrand falls below
// exp(-38) of the peak, then adaptive Gauss-Kronrod on the bracket.
template <typename LogF>
double log_integrate_line(LogF&& logf, double lo_hint = -40.0, double hi_hint = 40.0) {
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();
    constexpr int kGrid = 240;
    const double step0 = (hi_hint - lo_hint) / kGrid;

    double s_best = 0.0, l_best = kNegInf;
    for (int i = 0; i <= kGrid; ++i) {
        const double s = lo_hint + step0 * i;
        const double l = logf(s);
        if (l > l_best) { l_best = l; s_best = s; }
    }
    if (l_best == kNegInf) return kNegInf;

    // Golden refinement inside the winning cell.
    {
        double a = s_best - step0, b = s_best + step0;
        const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
        double c = b - phi * (b - a), d = a + phi * (b - a);
        double fc = logf(c), fd = logf(d);
        while (b - a > 1e-6) {
            if (fc > fd) { b = d; d = c; fd = fc; c = b - phi * (b - a); fc = logf(c); }
            else { a = c; c = d; fc = fd; d = a + phi * (b - a); fd = logf(d); }
        }
        const double sm = 0.5 * (a + b);
        const double lm = logf(sm);
        if (lm > l_best) { l_best = lm; s_best = sm; }
    }

    const double cutoff = l_best - 38.0;
    double lo = s_best, hi = s_best;
    double step = step0;
    while (logf(lo) > cutoff && lo > s_best - 2000.0) { lo -= step; step *= 1.3; }
    step = step0;
    while (logf(hi) > cutoff && hi < s_best + 2000.0) { hi += step; step *= 1.3; }

    const double peak = l_best;
    auto f = [&](double s) {
        const double l = logf(s);
        return l == kNegInf ? 0.0 : std::exp(l - peak);
    };
    const double val = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, lo, hi, 10, 1e-9);
    return peak + std::log(val);
}

}  // namespace evt
