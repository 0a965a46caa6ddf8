#include "evt/mvgp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "evt/errors.hpp"
#include "evt/nelder_mead.hpp"
#include "evt/quadrature.hpp"
#include "evt/rng.hpp"
#include "evt/stats.hpp"

namespace evt {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// 1 - q1*q2*q3 expanded in the survival probabilities, stable when the
// cdfs are all close to 1.
double one_minus_cdf_product(const GeneratorFamily& f, double s) {
    const double q1 = marginal_survival(f, 0, s);
    const double q2 = marginal_survival(f, 1, s);
    const double q3 = marginal_survival(f, 2, s);
    return q1 + q2 + q3 - q1 * q2 - q1 * q3 - q2 * q3 + q1 * q2 * q3;
}

// For Gumbel and reverse-Gumbel generators the log-integrand
// s + sum_i log f_i(x_i + s) is strictly concave in s, so the peak is
// found by Newton steps and the truncation points by bisection; much
// cheaper than the generic grid search and used heavily inside fits.
double log_integral_concave(const GeneratorFamily& f, const ExcessVector& x) {
    const double sign = f.kind == GeneratorKind::kGumbel ? -1.0 : 1.0;
    auto logf = [&](double s) {
        double acc = s;
        for (int i = 0; i < 3; ++i) {
            const double z = sign * f.alpha[i] * (x[i] + s - f.beta[i]);
            acc += std::log(f.alpha[i]) + z - std::exp(z);
        }
        return acc;
    };
    auto deriv = [&](double s) {
        double d = 1.0;
        for (int i = 0; i < 3; ++i) {
            const double z = sign * f.alpha[i] * (x[i] + s - f.beta[i]);
            d += sign * f.alpha[i] * (1.0 - std::exp(z));
        }
        return d;
    };
    auto second = [&](double s) {
        double d = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double z = sign * f.alpha[i] * (x[i] + s - f.beta[i]);
            d -= f.alpha[i] * f.alpha[i] * std::exp(z);
        }
        return d;
    };

    // deriv is strictly decreasing, so bracket its root by doubling and
    // close in with bisection plus Newton polish.
    double lo = 0.0, hi = 0.0;
    if (deriv(0.0) > 0.0) {
        for (double step = 1.0; deriv(hi) > 0.0 && step < 1e6; step *= 2.0) hi += step;
    } else {
        for (double step = 1.0; deriv(lo) < 0.0 && step < 1e6; step *= 2.0) lo -= step;
    }
    for (int it = 0; it < 40 && hi - lo > 1e-5; ++it) {
        const double mid = 0.5 * (lo + hi);
        (deriv(mid) > 0.0 ? lo : hi) = mid;
    }
    double s = 0.5 * (lo + hi);
    for (int it = 0; it < 4; ++it) {
        const double g = deriv(s);
        if (std::abs(g) < 1e-13) break;
        const double next = s - g / second(s);
        if (next <= lo - 1.0 || next >= hi + 1.0) break;
        s = next;
    }
    const double peak = logf(s);
    const double target = peak - 32.0;

    auto cut = [&](double direction) {
        double step = 1.0, far = s;
        while (logf(far + direction * step) > target && step < 4096.0) step *= 2.0;
        double lo = far + direction * step / 2.0, hi = far + direction * step;
        if (step >= 4096.0) return hi;
        for (int it = 0; it < 20 && std::abs(hi - lo) > 1e-3; ++it) {
            const double mid = 0.5 * (lo + hi);
            (logf(mid) > target ? lo : hi) = mid;
        }
        return hi;
    };
    const double a = cut(-1.0), b = cut(+1.0);
    const double val = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [&](double t) { return std::exp(logf(t) - peak); }, std::min(a, b), std::max(a, b),
        10, 1e-8);
    return peak + std::log(val);
}

// Generic grid-scan route; slower but free of the concavity assumption,
// kept as the independent cross-check of the fast path.
double log_unnormalized_density_generic(const GeneratorFamily& f, const ExcessVector& x) {
    auto logf = [&](double s) {
        double acc = s;
        for (int i = 0; i < 3; ++i) {
            const double l = marginal_log_pdf(f, i, x[i] + s);
            if (l == kNegInf) return kNegInf;
            acc += l;
        }
        return acc;
    };
    return log_integrate_line(logf);
}

double log_unnormalized_density(const GeneratorFamily& f, const ExcessVector& x) {
    if (f.kind != GeneratorKind::kReverseExponential) return log_integral_concave(f, x);
    return log_unnormalized_density_generic(f, x);
}

// Supp.-closed-form of the reverse-exponential GP density, up to the
// normalizer: phi(x) = prod(1/a_i) e^{sum (x_i+b_i)/a_i}
//                      e^{-max(x+b)(1+sum 1/a_i)} / (1+sum 1/a_i).
double log_unnormalized_density_revexp(const GeneratorFamily& f, const ExcessVector& x) {
    double inv_sum = 0.0, lin = 0.0, mx = kNegInf;
    for (int i = 0; i < 3; ++i) {
        inv_sum += 1.0 / f.alpha[i];
        lin += (x[i] + f.beta[i]) / f.alpha[i] - std::log(f.alpha[i]);
        mx = std::max(mx, x[i] + f.beta[i]);
    }
    return lin - mx * (1.0 + inv_sum) - std::log(1.0 + inv_sum);
}

struct ParamMap {
    GeneratorKind kind;
    Submodel submodel;

    double alpha_of(double a) const {
        return kind == GeneratorKind::kGumbel ? 1.0 + std::exp(a) : std::exp(a);
    }

    double a_inv(double alpha) const {
        return kind == GeneratorKind::kGumbel ? std::log(std::max(alpha - 1.0, 1e-6))
                                              : std::log(alpha);
    }

    std::vector<double> pack(const GeneratorFamily& f) const {
        switch (submodel) {
            case Submodel::kM1:
                return {a_inv(f.alpha[0]), a_inv(f.alpha[1]), a_inv(f.alpha[2]), f.beta[1],
                        f.beta[2]};
            case Submodel::kM2:
                return {a_inv(f.alpha[0]), a_inv(f.alpha[1]), a_inv(f.alpha[2])};
            case Submodel::kM3:
                return {a_inv(f.alpha[0]), f.beta[1], f.beta[2]};
            case Submodel::kM4:
                return {a_inv(f.alpha[0])};
        }
        return {};
    }

    GeneratorFamily unpack(const std::vector<double>& theta) const {
        GeneratorFamily f;
        f.kind = kind;
        switch (submodel) {
            case Submodel::kM1:
                f.alpha = {alpha_of(theta[0]), alpha_of(theta[1]), alpha_of(theta[2])};
                f.beta = {0.0, theta[3], theta[4]};
                break;
            case Submodel::kM2:
                f.alpha = {alpha_of(theta[0]), alpha_of(theta[1]), alpha_of(theta[2])};
                f.beta = {0.0, 0.0, 0.0};
                break;
            case Submodel::kM3: {
                const double a = alpha_of(theta[0]);
                f.alpha = {a, a, a};
                f.beta = {0.0, theta[1], theta[2]};
                break;
            }
            case Submodel::kM4: {
                const double a = alpha_of(theta[0]);
                f.alpha = {a, a, a};
                f.beta = {0.0, 0.0, 0.0};
                break;
            }
        }
        return f;
    }
};

double total_log_lik(const GpDensity& density, const std::vector<ExcessVector>& vectors) {
    double ll = 0.0;
    for (const auto& v : vectors) {
        const double l = density.log_density(v);
        if (!std::isfinite(l)) return kNegInf;
        ll += l;
    }
    return ll;
}

}  // namespace

int submodel_param_count(Submodel m) {
    switch (m) {
        case Submodel::kM1: return 5;
        case Submodel::kM2: return 3;
        case Submodel::kM3: return 3;
        case Submodel::kM4: return 1;
    }
    return 0;
}

std::string to_string(Submodel m) {
    switch (m) {
        case Submodel::kM1: return "M1";
        case Submodel::kM2: return "M2";
        case Submodel::kM3: return "M3";
        case Submodel::kM4: return "M4";
    }
    return "?";
}

double MvGpModel::aic() const {
    return 2.0 * submodel_param_count(submodel) - 2.0 * log_lik;
}

double MvGpModel::bic() const {
    return submodel_param_count(submodel) * std::log(static_cast<double>(n_vectors)) -
           2.0 * log_lik;
}

double normalizer(const GeneratorFamily& family) {
    family.validate();
    auto logf = [&](double s) {
        const double v = one_minus_cdf_product(family, s);
        if (v <= 0.0) return kNegInf;
        return std::log(v) + s;
    };
    const double c = std::exp(log_integrate_line(logf));
    if (!std::isfinite(c) || c <= 0.0)
        throw NumericError("normalizer: integral did not evaluate to a positive finite value");
    return c;
}

GpDensity::GpDensity(GeneratorFamily family) : family_(std::move(family)) {
    log_norm_ = std::log(normalizer(family_));
}

double GpDensity::log_density(const ExcessVector& x) const {
    if (!is_positive_excess(x)) throw DomainError("gp_log_density: not a positive excess vector");
    if (family_.kind == GeneratorKind::kReverseExponential)
        return log_unnormalized_density_revexp(family_, x) - log_norm_;
    return log_unnormalized_density(family_, x) - log_norm_;
}

double GpDensity::log_density_quadrature(const ExcessVector& x) const {
    if (!is_positive_excess(x)) throw DomainError("gp_log_density: not a positive excess vector");
    return log_unnormalized_density_generic(family_, x) - log_norm_;
}

double gp_log_density(const GeneratorFamily& family, const ExcessVector& x) {
    return GpDensity(family).log_density(x);
}

double gp_log_density_general(const GeneratorFamily& family, const Vec3& x,
                              const Vec3& sigma, const Vec3& gamma) {
    Vec3 z;
    double jac = 0.0;
    for (int j = 0; j < 3; ++j) {
        if (sigma[j] <= 0.0) throw DomainError("gp_log_density_general: sigma must be positive");
        const double w = 1.0 + gamma[j] * x[j] / sigma[j];
        if (w <= 0.0) throw DomainError("gp_log_density_general: margin support violated");
        z[j] = std::abs(gamma[j]) < 1e-12 ? x[j] / sigma[j] : std::log(w) / gamma[j];
        jac -= std::log(sigma[j] + gamma[j] * x[j]);
    }
    return gp_log_density(family, z) + jac;
}

MvGpModel fit_mvgp(const std::vector<ExcessVector>& vectors, GeneratorKind kind,
                   Submodel submodel, const FitOptions& options) {
    if (vectors.size() < 10) throw FitError("fit_mvgp: need at least 10 positive excess vectors");
    for (const auto& v : vectors)
        if (!is_positive_excess(v)) throw DomainError("fit_mvgp: vector is not a positive excess");

    const ParamMap map{kind, submodel};
    const int n_params = submodel_param_count(submodel);

    auto neg_log_lik = [&](const std::vector<double>& theta) {
        for (double t : theta)
            if (!std::isfinite(t) || std::abs(t) > 50.0) return 1e100;
        try {
            const GpDensity density(map.unpack(theta));
            const double ll = total_log_lik(density, vectors);
            return std::isfinite(ll) ? -ll : 1e100;
        } catch (const std::exception&) {
            return 1e100;
        }
    };

    // Moment-flavored center: alpha near 2, beta offsets from component means.
    Vec3 means{0.0, 0.0, 0.0};
    for (const auto& v : vectors)
        for (int j = 0; j < 3; ++j) means[j] += v[j] / static_cast<double>(vectors.size());
    std::vector<double> center(n_params, 0.0);
    if (options.init && options.init->kind == kind) {
        center = map.pack(*options.init);
    } else if (submodel == Submodel::kM1) {
        center[3] = std::clamp(means[1] - means[0], -2.0, 2.0);
        center[4] = std::clamp(means[2] - means[0], -2.0, 2.0);
    } else if (submodel == Submodel::kM3) {
        center[1] = std::clamp(means[1] - means[0], -2.0, 2.0);
        center[2] = std::clamp(means[2] - means[0], -2.0, 2.0);
    }

    CounterRng rng(options.seed);
    SimplexResult best;
    best.fmin = std::numeric_limits<double>::infinity();
    bool any_converged = false;
    for (int start = 0; start < std::max(1, options.n_starts); ++start) {
        std::vector<double> x0 = center;
        if (start > 0) {
            CounterRng r = rng.substream(start);
            for (auto& t : x0) t += 2.0 * r.next_double() - 1.0;
        }
        SimplexResult res = nelder_mead(neg_log_lik, x0, 0.25, 1e-9, 1e-7, options.max_iter);
        if (res.fmin < best.fmin) {
            best = std::move(res);
            any_converged = best.converged;
        }
    }
    if (best.fmin >= 1e99)
        throw FitError("fit_mvgp: no start produced a finite likelihood");
    if (!any_converged)
        throw FitError("fit_mvgp: simplex did not converge (best -loglik " +
                       std::to_string(best.fmin) + ")");

    MvGpModel model;
    model.family = map.unpack(best.x);
    model.log_lik = -best.fmin;
    model.n_vectors = static_cast<int>(vectors.size());
    model.submodel = submodel;
    if (kind == GeneratorKind::kGumbel) {
        for (double a : model.family.alpha)
            if (a < 1.0 + 1e-3) model.boundary_warning = true;
    }
    return model;
}

std::vector<SelectionRow> model_selection(const std::vector<ExcessVector>& vectors,
                                          const FitOptions& options) {
    std::vector<SelectionRow> rows;
    for (GeneratorKind kind : {GeneratorKind::kGumbel, GeneratorKind::kReverseExponential,
                               GeneratorKind::kReverseGumbel}) {
        SelectionRow row;
        row.kind = kind;
        try {
            const MvGpModel m = fit_mvgp(vectors, kind, Submodel::kM1, options);
            row.aic = m.aic();
            row.bic = m.bic();
            row.log_lik = m.log_lik;
            row.ok = true;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(row);
    }
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        if (a.ok != b.ok) return a.ok;
        return a.aic < b.aic;
    });
    return rows;
}

std::vector<LadderRow> simplify_ladder(const std::vector<ExcessVector>& vectors,
                                       GeneratorKind kind, const FitOptions& options) {
    const MvGpModel m1 = fit_mvgp(vectors, kind, Submodel::kM1, options);
    std::vector<LadderRow> rows;
    for (Submodel sub : {Submodel::kM1, Submodel::kM2, Submodel::kM3, Submodel::kM4}) {
        const MvGpModel m = sub == Submodel::kM1 ? m1 : fit_mvgp(vectors, kind, sub, options);
        LadderRow row;
        row.submodel = sub;
        row.n_params = submodel_param_count(sub);
        row.aic = m.aic();
        row.bic = m.bic();
        row.log_lik = m.log_lik;
        if (sub != Submodel::kM1) {
            const double dev = std::max(0.0, 2.0 * (m1.log_lik - m.log_lik));
            const double df = submodel_param_count(Submodel::kM1) - row.n_params;
            row.p_value_vs_m1 = chi_square_upper_tail(dev, df);
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<ExcessVector> standardize(const std::vector<Vec3>& raw, const Vec3& thresholds,
                                      const Vec3& scales) {
    for (double s : scales)
        if (s <= 0.0) throw DomainError("standardize: scales must be positive");
    std::vector<ExcessVector> out;
    for (const auto& y : raw) {
        ExcessVector x;
        for (int j = 0; j < 3; ++j) x[j] = (y[j] - thresholds[j]) / scales[j];
        if (is_positive_excess(x)) out.push_back(x);
    }
    return out;
}

}  // namespace evt
