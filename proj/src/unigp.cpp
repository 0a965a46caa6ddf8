#include "evt/unigp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "evt/errors.hpp"
#include "evt/stats.hpp"

namespace evt {
namespace {

constexpr double kGammaLo = -0.9;
constexpr double kGammaHi = 2.0;

double gp_log_lik(std::span<const double> x, double sigma, double gamma) {
    const auto n = static_cast<double>(x.size());
    if (sigma <= 0.0) return -std::numeric_limits<double>::infinity();
    if (std::abs(gamma) < 1e-12) {
        double s = 0.0;
        for (double v : x) s += v;
        return -n * std::log(sigma) - s / sigma;
    }
    double acc = 0.0;
    for (double v : x) {
        const double z = 1.0 + gamma * v / sigma;
        if (z <= 0.0) return -std::numeric_limits<double>::infinity();
        acc += std::log(z);
    }
    return -n * std::log(sigma) - (1.0 + 1.0 / gamma) * acc;
}

// Golden-section maximization on [lo, hi] for a unimodal objective.
template <typename F>
double golden_max(F f, double lo, double hi, double tol) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d; d = c; fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    return (a + b) / 2.0;
}

double profile_sigma(std::span<const double> x, double gamma) {
    const double m = mean(x);
    // Bracket around the exponential-scale order of magnitude.
    const double lo = std::log(m) - 6.0, hi = std::log(m) + 6.0;
    return std::exp(golden_max([&](double ls) { return gp_log_lik(x, std::exp(ls), gamma); },
                               lo, hi, 1e-10));
}

}  // namespace

double gp_cdf(double x, double sigma, double gamma) {
    if (sigma <= 0.0) throw DomainError("gp_cdf: sigma must be positive");
    if (x <= 0.0) return 0.0;
    if (std::abs(gamma) < 1e-12) return 1.0 - std::exp(-x / sigma);
    const double z = 1.0 + gamma * x / sigma;
    if (z <= 0.0) return 1.0;  // beyond the upper endpoint (gamma < 0)
    return 1.0 - std::pow(z, -1.0 / gamma);
}

UnivariateGpFit fit_exponential(std::span<const double> excesses) {
    if (excesses.empty()) throw FitError("fit_exponential: need at least one excess");
    for (double v : excesses)
        if (v <= 0.0) throw DomainError("fit_exponential: excesses must be positive");
    UnivariateGpFit fit;
    fit.n_excess = static_cast<int>(excesses.size());
    fit.sigma = mean(excesses);
    fit.gamma = 0.0;
    fit.gamma_fixed = true;
    fit.log_lik = gp_log_lik(excesses, fit.sigma, 0.0);
    const double half = 1.959963984540054 * fit.sigma / std::sqrt(static_cast<double>(fit.n_excess));
    fit.sigma_ci = {fit.sigma - half, fit.sigma + half};
    return fit;
}

UnivariateGpFit fit_gp_excesses(std::span<const double> excesses) {
    if (excesses.size() < 5) throw FitError("fit_gp_excesses: need at least 5 excesses");
    for (double v : excesses)
        if (v <= 0.0) throw DomainError("fit_gp_excesses: excesses must be positive");

    // Grid scan over gamma, then golden refinement around the best cell.
    const int grid = 59;
    double best_g = 0.0, best_ll = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= grid; ++i) {
        const double g = kGammaLo + (kGammaHi - kGammaLo) * i / grid;
        const double ll = gp_log_lik(excesses, profile_sigma(excesses, g), g);
        if (ll > best_ll) { best_ll = ll; best_g = g; }
    }
    const double cell = (kGammaHi - kGammaLo) / grid;
    const double g_lo = std::max(kGammaLo, best_g - cell);
    const double g_hi = std::min(kGammaHi, best_g + cell);
    const double gamma = golden_max(
        [&](double g) { return gp_log_lik(excesses, profile_sigma(excesses, g), g); },
        g_lo, g_hi, 1e-8);

    UnivariateGpFit fit;
    fit.n_excess = static_cast<int>(excesses.size());
    fit.gamma = gamma;
    fit.sigma = profile_sigma(excesses, gamma);
    fit.gamma_fixed = false;
    fit.log_lik = gp_log_lik(excesses, fit.sigma, fit.gamma);
    if (!std::isfinite(fit.log_lik)) throw FitError("fit_gp_excesses: likelihood not finite at optimum");

    // Observed information for sigma with gamma held at its estimate.
    const double h = fit.sigma * 1e-4;
    const double d2 = (gp_log_lik(excesses, fit.sigma + h, gamma) - 2.0 * fit.log_lik +
                       gp_log_lik(excesses, fit.sigma - h, gamma)) / (h * h);
    if (d2 < 0.0) {
        const double se = std::sqrt(-1.0 / d2);
        fit.sigma_ci = {fit.sigma - 1.959963984540054 * se, fit.sigma + 1.959963984540054 * se};
    } else {
        fit.sigma_ci = {fit.sigma, fit.sigma};
    }
    return fit;
}

double lr_test_gamma_zero(const UnivariateGpFit& fit_free, const UnivariateGpFit& fit_exp) {
    if (fit_free.n_excess != fit_exp.n_excess)
        throw DomainError("lr_test_gamma_zero: fits are not on the same data");
    const double deviance = std::max(0.0, 2.0 * (fit_free.log_lik - fit_exp.log_lik));
    return chi_square_upper_tail(deviance, 1.0);
}

double tail_cdf(double y, const UnivariateGpFit& fit) {
    if (y <= fit.threshold) throw DomainError("tail_cdf: y must exceed the threshold");
    return 1.0 - fit.exceed_freq * (1.0 - gp_cdf(y - fit.threshold, fit.sigma, fit.gamma));
}

double return_level(const UnivariateGpFit& fit, const ReturnLevelQuery& q) {
    if (!fit.gamma_fixed) throw DomainError("return_level: requires the exponential (gamma=0) fit");
    if (q.alpha <= 0.0 || q.alpha >= 1.0 || q.n < 1) throw DomainError("return_level: invalid query");
    const double tail = 1.0 - std::pow(q.alpha, 1.0 / q.n);
    if (fit.exceed_freq < tail)
        throw DomainError("return_level: level below threshold not estimable");
    return fit.threshold + fit.sigma * (std::log(fit.exceed_freq) - std::log(tail));
}

std::vector<std::pair<double, double>> qq_plot_data(std::span<const double> excesses,
                                                    const UnivariateGpFit& fit) {
    std::vector<double> sorted(excesses.begin(), excesses.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::pair<double, double>> out;
    out.reserve(sorted.size());
    const double n = static_cast<double>(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double p = static_cast<double>(i + 1) / (n + 1.0);
        double q;
        if (fit.gamma_fixed || std::abs(fit.gamma) < 1e-12) {
            q = -fit.sigma * std::log(1.0 - p);
        } else {
            q = fit.sigma / fit.gamma * (std::pow(1.0 - p, -fit.gamma) - 1.0);
        }
        out.emplace_back(q, sorted[i]);
    }
    return out;
}

}  // namespace evt
