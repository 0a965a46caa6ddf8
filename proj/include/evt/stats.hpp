#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "evt/errors.hpp"

namespace evt {

// Linear interpolation of order statistics at plotting position
// (k-1)/(n-1), i.e. R's default type-7 rule.
inline double empirical_quantile(std::span<const double> values, double p) {
    if (values.empty()) throw DomainError("empirical_quantile: empty sample");
    if (p < 0.0 || p > 1.0) throw DomainError("empirical_quantile: p outside [0,1]");
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    if (v.size() == 1) return v[0];
    const double h = p * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= v.size()) return v.back();
    return v[lo] + (h - static_cast<double>(lo)) * (v[lo + 1] - v[lo]);
}

inline double mean(std::span<const double> v) {
    if (v.empty()) throw DomainError("mean: empty sample");
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Upper tail of the chi-square distribution with df degrees of freedom.
inline double chi_square_upper_tail(double x, double df) {
    if (x <= 0.0) return 1.0;
    return boost::math::gamma_q(df / 2.0, x / 2.0);
}

}  // namespace evt
