#include "evt/assess.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>
#include <omp.h>

#include "evt/errors.hpp"
#include "evt/predict.hpp"
#include "evt/stats.hpp"
#include "evt/unigp.hpp"

namespace evt {
namespace {

std::optional<double> try_brier(const std::vector<PredictionRecord>& records) {
    try {
        return brier_standardized(records);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::optional<double> try_ap(const std::vector<PredictionRecord>& records) {
    try {
        return average_precision(records);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::vector<PredictionRecord> filter(const std::vector<PredictionRecord>& records,
                                     double level, PredictorSource source) {
    std::vector<PredictionRecord> out;
    for (const auto& r : records)
        if (r.level == level && r.source == source) out.push_back(r);
    return out;
}

std::vector<QuartileRow> quartiles_by_outcome(const std::vector<PredictionRecord>& records) {
    std::vector<QuartileRow> rows;
    for (int outcome : {0, 1}) {
        std::vector<double> p;
        for (const auto& r : records)
            if (r.outcome == outcome) p.push_back(r.p_hat);
        if (p.empty()) continue;
        QuartileRow row;
        row.outcome = outcome;
        row.proportion = static_cast<double>(p.size()) / static_cast<double>(records.size());
        row.q25 = empirical_quantile(p, 0.25);
        row.median = empirical_quantile(p, 0.50);
        row.q75 = empirical_quantile(p, 0.75);
        rows.push_back(row);
    }
    return rows;
}

// Mean positive excess over the threshold, i.e. the exponential scale MLE.
double excess_scale(const std::vector<double>& values, double threshold) {
    std::vector<double> ex;
    for (double v : values)
        if (v > threshold) ex.push_back(v - threshold);
    if (ex.empty()) throw FitError("no positive excesses for scale estimation");
    return mean(ex);
}

}  // namespace

std::string to_string(PredictorSource s) {
    switch (s) {
        case PredictorSource::kGp: return "gp";
        case PredictorSource::kLogistic: return "logistic";
        case PredictorSource::kTrueModel: return "true_model";
    }
    return "?";
}

double brier_standardized(std::span<const PredictionRecord> records) {
    if (records.empty()) throw DomainError("brier_standardized: no records");
    double p = 0.0, mse = 0.0;
    for (const auto& r : records) {
        p += r.outcome;
        mse += (r.p_hat - r.outcome) * (r.p_hat - r.outcome);
    }
    const double n = static_cast<double>(records.size());
    p /= n;
    mse /= n;
    if (p <= 0.0 || p >= 1.0)
        throw DomainError("brier_standardized: all outcomes identical, score undefined");
    return 1.0 - mse / (p * (1.0 - p));
}

std::vector<PrPoint> pr_curve(std::span<const PredictionRecord> records) {
    std::vector<PredictionRecord> sorted(records.begin(), records.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.p_hat > b.p_hat; });
    int total_pos = 0;
    for (const auto& r : sorted) total_pos += r.outcome;
    if (total_pos == 0) throw DomainError("pr_curve: no positive outcomes");

    std::vector<PrPoint> out;
    int tp = 0, fp = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        tp += sorted[i].outcome;
        fp += 1 - sorted[i].outcome;
        const bool group_end = i + 1 == sorted.size() || sorted[i + 1].p_hat != sorted[i].p_hat;
        if (group_end) {
            out.push_back({sorted[i].p_hat,
                           static_cast<double>(tp) / static_cast<double>(tp + fp),
                           static_cast<double>(tp) / static_cast<double>(total_pos)});
        }
    }
    return out;
}

double average_precision(std::span<const PredictionRecord> records) {
    const auto curve = pr_curve(records);
    double ap = 0.0, prev_recall = 0.0;
    for (const auto& pt : curve) {
        ap += (pt.recall - prev_recall) * pt.precision;
        prev_recall = pt.recall;
    }
    return ap;
}

LogisticModel fit_logistic(const std::vector<std::array<double, 2>>& covariates,
                           const std::vector<int>& outcomes) {
    const std::size_t n = covariates.size();
    if (n != outcomes.size() || n < 3) throw DomainError("fit_logistic: bad inputs");
    int pos = 0;
    for (int o : outcomes) pos += o;
    if (pos == 0 || pos == static_cast<int>(n))
        throw DomainError("fit_logistic: single outcome class");

    // Standardized covariates keep the normal equations well conditioned.
    Eigen::MatrixXd x(n, 3);
    Eigen::VectorXd y(n);
    double m1 = 0, m2 = 0;
    for (const auto& c : covariates) { m1 += c[0]; m2 += c[1]; }
    m1 /= n; m2 /= n;
    double s1 = 0, s2 = 0;
    for (const auto& c : covariates) {
        s1 += (c[0] - m1) * (c[0] - m1);
        s2 += (c[1] - m2) * (c[1] - m2);
    }
    s1 = std::sqrt(s1 / n); s2 = std::sqrt(s2 / n);
    if (s1 <= 0.0 || s2 <= 0.0) throw DomainError("fit_logistic: degenerate covariate");
    for (std::size_t i = 0; i < n; ++i) {
        x(i, 0) = 1.0;
        x(i, 1) = (covariates[i][0] - m1) / s1;
        x(i, 2) = (covariates[i][1] - m2) / s2;
        y(i) = outcomes[i];
    }

    Eigen::Vector3d beta = Eigen::Vector3d::Zero();
    bool converged = false;
    for (int iter = 0; iter < 100; ++iter) {
        const Eigen::VectorXd eta = x * beta;
        Eigen::VectorXd p(n), w(n);
        for (std::size_t i = 0; i < n; ++i) {
            p(i) = 1.0 / (1.0 + std::exp(-eta(i)));
            w(i) = std::max(p(i) * (1.0 - p(i)), 1e-12);
        }
        const Eigen::Matrix3d h = x.transpose() * w.asDiagonal() * x;
        const Eigen::Vector3d g = x.transpose() * (y - p);
        const Eigen::Vector3d step = h.ldlt().solve(g);
        beta += step;
        if (beta.norm() > 1e3)
            throw FitError("fit_logistic: divergence (complete separation?)");
        if (step.norm() < 1e-10) { converged = true; break; }
    }
    if (!converged) throw FitError("fit_logistic: IRLS did not converge");

    LogisticModel m;
    m.slope_y1 = beta(1) / s1;
    m.slope_y2 = beta(2) / s2;
    m.intercept = beta(0) - m.slope_y1 * m1 - m.slope_y2 * m2;
    return m;
}

double predict_logistic(const LogisticModel& m, double y1, double y2) {
    return 1.0 / (1.0 + std::exp(-(m.intercept + m.slope_y1 * y1 + m.slope_y2 * y2)));
}

LooAssessment loo_assess(const std::vector<Vec3>& features, const std::vector<double>& levels,
                         const LooConfig& config) {
    if (features.size() < 3) throw DomainError("loo_assess: need at least 3 epidemics");
    const int n = static_cast<int>(features.size());

    // Levels with fewer than 2 exceedances in the full data are skipped.
    std::vector<double> active;
    LooAssessment out;
    for (double level : levels) {
        int exceed = 0;
        for (const auto& f : features) exceed += f[2] > level ? 1 : 0;
        if (exceed < 2) {
            LooLevelScore s;
            s.level = level;
            s.skipped_reason = "only " + std::to_string(exceed) + " exceedance(s) in the data";
            out.scores.push_back(s);
        } else {
            active.push_back(level);
        }
    }

    std::vector<std::vector<PredictionRecord>> fold_records(n);
    std::vector<std::string> fold_errors(n);

    const int nt = config.n_threads > 0 ? config.n_threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nt)
    for (int i = 0; i < n; ++i) {
        try {
            std::vector<Vec3> train;
            train.reserve(features.size() - 1);
            for (int j = 0; j < n; ++j)
                if (j != i) train.push_back(features[j]);

            std::vector<double> c1, c2, c3;
            for (const auto& f : train) {
                c1.push_back(f[0]);
                c2.push_back(f[1]);
                c3.push_back(f[2]);
            }
            const Vec3 scales{excess_scale(c1, config.thresholds[0]),
                              excess_scale(c2, config.thresholds[1]),
                              excess_scale(c3, config.thresholds[2])};

            MvGpModel model =
                fit_mvgp(standardize(train, config.thresholds, scales),
                         GeneratorKind::kGumbel, Submodel::kM1, config.fit);
            model.marginal_scales = scales;
            model.thresholds = config.thresholds;
            const double btp = below_threshold_prob(train, config.thresholds);

            for (double level : active) {
                const int outcome = features[i][2] > level ? 1 : 0;
                const double p =
                    predict_level(model, {features[i][0], features[i][1], level, btp});
                fold_records[i].push_back({p, outcome, level, PredictorSource::kGp});

                try {
                    std::vector<std::array<double, 2>> cov;
                    std::vector<int> y;
                    for (const auto& f : train) {
                        cov.push_back({f[0], f[1]});
                        y.push_back(f[2] > level ? 1 : 0);
                    }
                    const LogisticModel lm = fit_logistic(cov, y);
                    const double pl = predict_logistic(lm, features[i][0], features[i][1]);
                    fold_records[i].push_back({pl, outcome, level, PredictorSource::kLogistic});
                } catch (const std::exception&) {
                    // logistic baseline unavailable for this fold/level
                }
            }
        } catch (const std::exception& e) {
            fold_errors[i] = e.what();
        }
    }

    for (int i = 0; i < n; ++i) {
        out.records.insert(out.records.end(), fold_records[i].begin(), fold_records[i].end());
        if (!fold_errors[i].empty())
            out.fold_errors.push_back("fold " + std::to_string(i) + ": " + fold_errors[i]);
    }
    for (double level : active) {
        LooLevelScore s;
        s.level = level;
        s.gp_brier = try_brier(filter(out.records, level, PredictorSource::kGp));
        s.logistic_brier = try_brier(filter(out.records, level, PredictorSource::kLogistic));
        out.scores.push_back(s);
    }
    std::sort(out.scores.begin(), out.scores.end(),
              [](const auto& a, const auto& b) { return a.level < b.level; });
    return out;
}

SimAssessment sim_assess(const MvGpModel& true_model, const std::vector<double>& levels,
                         const SimAssessConfig& config) {
    if (config.sim.n_vectors < 12)
        throw ConfigError("sim_assess: n_vectors must leave at least 11 training vectors");
    const int n_train = config.sim.n_vectors - 1;
    const int n_datasets = config.sim.n_datasets;
    const GpSampler sampler(true_model.family);

    // Levels at or below the third threshold are allowed: the standardized
    // target is then non-positive and conditioning degenerates gracefully.
    std::vector<double> v3s;
    for (double level : levels)
        v3s.push_back((level - true_model.thresholds[2]) / true_model.marginal_scales[2]);

    std::vector<std::vector<PredictionRecord>> per_dataset(n_datasets);
    std::atomic<int> failed{0};
    FitOptions fit = config.fit;
    fit.init = true_model.family;
    const int nt = config.n_threads > 0 ? config.n_threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nt)
    for (int d = 0; d < n_datasets; ++d) {
        CounterRng rng(config.sim.seed, static_cast<std::uint64_t>(d));
        const auto data = sampler.sample_n(rng, config.sim.n_vectors);
        const std::vector<ExcessVector> train(data.begin(), data.begin() + n_train);
        const ExcessVector& test = data.back();
        try {
            MvGpModel fitted = fit_mvgp(train, true_model.family.kind,
                                        true_model.submodel, fit);
            fitted.marginal_scales = true_model.marginal_scales;
            fitted.thresholds = true_model.thresholds;

            for (std::size_t li = 0; li < levels.size(); ++li) {
                const double v3 = v3s[li];
                const int outcome = test[2] > v3 ? 1 : 0;
                per_dataset[d].push_back(
                    {conditional_exceedance(fitted, test[0], test[1], v3), outcome,
                     levels[li], PredictorSource::kGp});
                per_dataset[d].push_back(
                    {conditional_exceedance(true_model, test[0], test[1], v3), outcome,
                     levels[li], PredictorSource::kTrueModel});
                try {
                    std::vector<std::array<double, 2>> cov;
                    std::vector<int> y;
                    for (const auto& x : train) {
                        cov.push_back({true_model.thresholds[0] +
                                           true_model.marginal_scales[0] * x[0],
                                       true_model.thresholds[1] +
                                           true_model.marginal_scales[1] * x[1]});
                        y.push_back(x[2] > v3 ? 1 : 0);
                    }
                    const LogisticModel lm = fit_logistic(cov, y);
                    const double y1 = true_model.thresholds[0] +
                                      true_model.marginal_scales[0] * test[0];
                    const double y2 = true_model.thresholds[1] +
                                      true_model.marginal_scales[1] * test[1];
                    per_dataset[d].push_back({predict_logistic(lm, y1, y2), outcome,
                                              levels[li], PredictorSource::kLogistic});
                } catch (const std::exception&) {
                    // too few exceedances for the logistic baseline here
                }
            }
        } catch (const std::exception&) {
            failed.fetch_add(1);
        }
    }

    SimAssessment out;
    out.n_failed_fits = failed.load();
    for (const auto& v : per_dataset)
        out.records.insert(out.records.end(), v.begin(), v.end());

    for (double level : levels) {
        SimLevelScore s;
        s.level = level;
        const auto gp = filter(out.records, level, PredictorSource::kGp);
        const auto lg = filter(out.records, level, PredictorSource::kLogistic);
        const auto tr = filter(out.records, level, PredictorSource::kTrueModel);
        s.gp_brier = try_brier(gp);
        s.gp_ap = try_ap(gp);
        s.true_brier = try_brier(tr);
        s.true_ap = try_ap(tr);
        // The logistic column only counts when most datasets could fit it.
        if (lg.size() * 2 >= gp.size()) {
            s.logistic_brier = try_brier(lg);
            s.logistic_ap = try_ap(lg);
        }
        s.gp_quartiles = quartiles_by_outcome(gp);
        out.scores.push_back(s);
    }
    return out;
}

}  // namespace evt
