#pragma once

#include <span>
#include <utility>
#include <vector>

namespace evt {

struct UnivariateGpFit {
    double threshold = 0.0;   // u
    double exceed_freq = 0.0; // p_u, empirical exceedance frequency
    double sigma = 1.0;
    double gamma = 0.0;
    bool gamma_fixed = false;
    double log_lik = 0.0;
    std::pair<double, double> sigma_ci{0.0, 0.0};  // 95%, observed information
    int n_excess = 0;
};

struct ReturnLevelQuery {
    double alpha = 0.9;  // non-exceedance probability over the horizon
    int n = 1;           // independent episodes in the horizon
};

// GP cdf of excesses, continuous in gamma at 0.
double gp_cdf(double x, double sigma, double gamma);

// Exponential MLE (gamma fixed to 0): sigma = mean of the excesses.
UnivariateGpFit fit_exponential(std::span<const double> excesses);

// Free-gamma MLE by profile likelihood over gamma in [-0.9, 2].
UnivariateGpFit fit_gp_excesses(std::span<const double> excesses);

// Chi-square(1) test of gamma = 0; deviance clamped at 0.
double lr_test_gamma_zero(const UnivariateGpFit& fit_free, const UnivariateGpFit& fit_exp);

// F(y) = 1 - p_u (1 - H(y - u)), valid for y > u.
double tail_cdf(double y, const UnivariateGpFit& fit);

// Level exceeded with probability 1 - alpha over n independent episodes
// (exponential excesses).
double return_level(const UnivariateGpFit& fit, const ReturnLevelQuery& q);

// (theoretical quantile, ordered excess) pairs at positions i/(n+1).
std::vector<std::pair<double, double>> qq_plot_data(std::span<const double> excesses,
                                                    const UnivariateGpFit& fit);

}  // namespace evt
