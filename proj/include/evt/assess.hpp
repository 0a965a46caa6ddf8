#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evt/mvgp.hpp"
#include "evt/segment.hpp"
#include "evt/simulate.hpp"

namespace evt {

enum class PredictorSource { kGp, kLogistic, kTrueModel };
std::string to_string(PredictorSource s);

struct PredictionRecord {
    double p_hat = 0.0;
    int outcome = 0;  // 0 or 1
    double level = 0.0;
    PredictorSource source = PredictorSource::kGp;
};

struct PrPoint {
    double cutoff = 0.0;
    double precision = 0.0;
    double recall = 0.0;
};

// 1 - MSE / (p (1 - p)); needs both outcome classes.
double brier_standardized(std::span<const PredictionRecord> records);

std::vector<PrPoint> pr_curve(std::span<const PredictionRecord> records);

// Step-wise sum over the recall sweep: AP = sum (R_n - R_{n-1}) P_n.
double average_precision(std::span<const PredictionRecord> records);

struct LogisticModel {
    double intercept = 0.0;
    double slope_y1 = 0.0;
    double slope_y2 = 0.0;
};

// MLE by iteratively reweighted least squares on (1, y1, y2).
LogisticModel fit_logistic(const std::vector<std::array<double, 2>>& covariates,
                           const std::vector<int>& outcomes);

double predict_logistic(const LogisticModel& m, double y1, double y2);

// ---- Leave-one-out assessment on observed epidemics --------------------

struct LooLevelScore {
    double level = 0.0;
    std::optional<double> gp_brier;
    std::optional<double> logistic_brier;
    std::string skipped_reason;  // non-empty when the level was not scored
};

struct LooAssessment {
    std::vector<PredictionRecord> records;
    std::vector<LooLevelScore> scores;
    std::vector<std::string> fold_errors;  // one entry per failed fold
};

struct LooConfig {
    Vec3 thresholds{0.0, 0.0, 0.0};  // (u1, u2, u_target), held fixed across folds
    FitOptions fit{6, 0x6c6f6fULL, 4000};
    int n_threads = 0;
};

// features rows are (y1, y2, target) in original units. Scales and the
// below-threshold adjustment are re-estimated per fold; a level needs at
// least 2 exceedances in the data or it is skipped with a reason.
LooAssessment loo_assess(const std::vector<Vec3>& features, const std::vector<double>& levels,
                         const LooConfig& config);

// ---- Simulation assessment against a known true model ------------------

struct QuartileRow {
    int outcome = 0;
    double proportion = 0.0;
    double q25 = 0.0, median = 0.0, q75 = 0.0;
};

struct SimLevelScore {
    double level = 0.0;
    std::optional<double> gp_brier, logistic_brier, true_brier;
    std::optional<double> gp_ap, logistic_ap, true_ap;
    std::vector<QuartileRow> gp_quartiles;  // stratified by outcome
};

struct SimAssessment {
    std::vector<PredictionRecord> records;
    std::vector<SimLevelScore> scores;
    int n_failed_fits = 0;
};

struct SimAssessConfig {
    SimulationConfig sim{1, 33, 1500};
    FitOptions fit{2, 0x73696dULL, 4000};
    int n_threads = 0;
};

// Per dataset: fit on the first 32 vectors, predict the third component of
// the 33rd given its first two, for the GP fit, the logistic baseline and
// the true-parameter model. Levels are in original units of `true_model`.
SimAssessment sim_assess(const MvGpModel& true_model, const std::vector<double>& levels,
                         const SimAssessConfig& config);

}  // namespace evt
