#include "evt/serfling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <boost/math/special_functions/erf.hpp>

#include "evt/errors.hpp"

namespace evt {

std::vector<double> serfling_baseline(const IncidenceSeries& series,
                                      const SerflingConfig& config) {
    const std::size_t n = series.size();
    if (n < 105) throw NumericError("serfling_baseline: series shorter than two full years");

    Eigen::MatrixXd design(n, 4);
    Eigen::VectorXd y(n);
    const double omega = 2.0 * std::numbers::pi / config.period_weeks;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i);
        design(i, 0) = 1.0;
        design(i, 1) = t;
        design(i, 2) = std::sin(omega * t);
        design(i, 3) = std::cos(omega * t);
        y(i) = series.records[i].rate;
    }

    // Gaussian upper quantile for the one-sided bound of the two-sided
    // prediction interval (z = 1.645 at level 0.90).
    const double z = std::sqrt(2.0) * boost::math::erf_inv(config.prediction_level);

    std::vector<char> excluded(n, 0);
    std::vector<char> previous(n, 0);  // state two refits ago, for 2-cycle detection
    std::vector<double> bound(n, 0.0);
    for (int iter = 0; iter < config.max_iter; ++iter) {
        std::size_t kept = 0;
        for (std::size_t i = 0; i < n; ++i) kept += excluded[i] ? 0 : 1;
        if (kept < 8) throw NumericError("serfling_baseline: too few non-epidemic weeks left");

        Eigen::MatrixXd xk(kept, 4);
        Eigen::VectorXd yk(kept);
        for (std::size_t i = 0, r = 0; i < n; ++i) {
            if (excluded[i]) continue;
            xk.row(r) = design.row(i);
            yk(r) = y(i);
            ++r;
        }
        const Eigen::VectorXd beta = xk.colPivHouseholderQr().solve(yk);
        // Robust residual scale (1.4826 * median absolute residual): the
        // least-squares scale of the kept points shrinks every pass because
        // the exclusions truncate the upper tail, and the iteration then
        // spirals instead of stabilizing.
        const Eigen::VectorXd res = yk - xk * beta;
        std::vector<double> absres(kept);
        for (std::size_t r = 0; r < kept; ++r) absres[r] = std::abs(res(r));
        std::nth_element(absres.begin(), absres.begin() + kept / 2, absres.end());
        const double sigma = 1.4826 * absres[kept / 2];

        bool changed = false;
        std::vector<char> next(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            bound[i] = design.row(i).dot(beta) + z * sigma;
            next[i] = y(i) > bound[i] ? 1 : 0;
            if (next[i] != excluded[i]) changed = true;
        }
        // The exclusion set either converges or falls into a short cycle of
        // near-identical sets; accept the fixed point or the cycle's bound.
        if (!changed || next == previous) return bound;
        previous = excluded;
        excluded = std::move(next);
    }
    throw NumericError("serfling_baseline: exclusion iteration did not stabilize");
}

}  // namespace evt
