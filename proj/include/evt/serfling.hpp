#pragma once

#include <vector>

#include "evt/series.hpp"

namespace evt {

struct SerflingConfig {
    double period_weeks = 52.18;  // one tropical year of ISO weeks
    double prediction_level = 0.90;
    int max_iter = 20;
};

// Upper bound of the prediction interval of a cyclic regression
// (intercept + linear trend + first annual harmonic pair), refit
// iteratively with weeks above the current bound excluded until the
// excluded set stabilizes.
std::vector<double> serfling_baseline(const IncidenceSeries& series,
                                      const SerflingConfig& config = {});

}  // namespace evt
