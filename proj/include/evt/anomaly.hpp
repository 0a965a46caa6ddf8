#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "evt/mvgp.hpp"
#include "evt/simulate.hpp"

namespace evt {

struct AnomalyCalibration {
    // significance level -> NLL cutoff; cutoffs grow as the level shrinks.
    std::map<double, double, std::greater<double>> cutoffs;
    int n_datasets = 0;
    int n_failed_fits = 0;
    std::uint64_t seed = 0;
};

struct CalibrationConfig {
    SimulationConfig sim;          // n_vectors = training size + 1
    FitOptions fit{2, 0x63616cULL, 4000};  // warm-started refits need few restarts
    std::vector<double> levels{0.10, 0.05, 0.01, 0.001};
    double max_failure_fraction = 0.05;
    int n_threads = 0;  // 0 = OpenMP default; 1 = serial reference
};

double nll_at(const MvGpModel& model, const ExcessVector& x);

// Per simulated dataset: fit on the first n-1 vectors, evaluate the NLL at
// the n-th; cutoffs are empirical quantiles of those NLLs.
AnomalyCalibration calibrate(const MvGpModel& model, const CalibrationConfig& config);

struct AnomalyVerdict {
    double nll = 0.0;
    std::vector<double> flagged_levels;  // levels whose cutoff the NLL exceeds
};

AnomalyVerdict test_anomaly(const MvGpModel& model, const AnomalyCalibration& calibration,
                            const ExcessVector& x);

struct LooNll {
    std::size_t index = 0;
    double nll = 0.0;
    bool ok = false;
    std::string error;
};

std::vector<LooNll> leave_one_out_nll(const std::vector<ExcessVector>& vectors,
                                      GeneratorKind kind = GeneratorKind::kGumbel,
                                      const FitOptions& options = {}, int n_threads = 0);

}  // namespace evt
