#include "evt/anomaly.hpp"

#include <atomic>
#include <cmath>

#include <omp.h>

#include "evt/errors.hpp"
#include "evt/stats.hpp"

namespace evt {

double nll_at(const MvGpModel& model, const ExcessVector& x) {
    return -gp_log_density(model.family, x);
}

AnomalyCalibration calibrate(const MvGpModel& model, const CalibrationConfig& config) {
    if (config.sim.n_vectors < 12)
        throw ConfigError("calibrate: n_vectors must leave at least 11 training vectors");
    const int n_train = config.sim.n_vectors - 1;
    const int n_datasets = config.sim.n_datasets;

    const GpSampler sampler(model.family);
    std::vector<double> nlls(n_datasets, std::numeric_limits<double>::quiet_NaN());
    std::atomic<int> failed{0};

    FitOptions fit = config.fit;
    fit.init = model.family;  // generating parameters are a sound warm start

    const int n_threads = config.n_threads > 0 ? config.n_threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(n_threads)
    for (int d = 0; d < n_datasets; ++d) {
        CounterRng rng(config.sim.seed, static_cast<std::uint64_t>(d));
        const auto data = sampler.sample_n(rng, config.sim.n_vectors);
        try {
            const std::vector<ExcessVector> train(data.begin(), data.begin() + n_train);
            const MvGpModel refit = fit_mvgp(train, model.family.kind, model.submodel, fit);
            nlls[d] = nll_at(refit, data.back());
        } catch (const std::exception&) {
            failed.fetch_add(1);
        }
    }

    if (failed.load() > config.max_failure_fraction * n_datasets)
        throw NumericError("calibrate: more than " +
                           std::to_string(config.max_failure_fraction * 100.0) +
                           "% of per-dataset fits failed");

    std::vector<double> ok;
    ok.reserve(nlls.size());
    for (double v : nlls)
        if (std::isfinite(v)) ok.push_back(v);

    AnomalyCalibration cal;
    cal.n_datasets = n_datasets;
    cal.n_failed_fits = failed.load();
    cal.seed = config.sim.seed;
    for (double level : config.levels)
        cal.cutoffs[level] = empirical_quantile(ok, 1.0 - level);
    return cal;
}

AnomalyVerdict test_anomaly(const MvGpModel& model, const AnomalyCalibration& calibration,
                            const ExcessVector& x) {
    AnomalyVerdict v;
    v.nll = nll_at(model, x);
    for (const auto& [level, cutoff] : calibration.cutoffs)
        if (v.nll > cutoff) v.flagged_levels.push_back(level);
    return v;
}

std::vector<LooNll> leave_one_out_nll(const std::vector<ExcessVector>& vectors,
                                      GeneratorKind kind, const FitOptions& options,
                                      int n_threads) {
    if (vectors.size() < 11) throw DomainError("leave_one_out_nll: need at least 11 vectors");
    const int n = static_cast<int>(vectors.size());
    std::vector<LooNll> out(n);

    const int nt = n_threads > 0 ? n_threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nt)
    for (int i = 0; i < n; ++i) {
        out[i].index = static_cast<std::size_t>(i);
        std::vector<ExcessVector> train;
        train.reserve(vectors.size() - 1);
        for (int j = 0; j < n; ++j)
            if (j != i) train.push_back(vectors[j]);
        try {
            const MvGpModel refit = fit_mvgp(train, kind, Submodel::kM1, options);
            out[i].nll = nll_at(refit, vectors[i]);
            out[i].ok = true;
        } catch (const std::exception& e) {
            out[i].error = e.what();
        }
    }
    return out;
}

}  // namespace evt
