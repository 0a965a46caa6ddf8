#pragma once

#include <optional>
#include <vector>

#include "evt/series.hpp"

namespace evt {

struct Epidemic {
    std::size_t start_index = 0;
    std::size_t end_index = 0;  // inclusive
    std::vector<double> weekly_rates;
    double size = 0.0;      // sum of weekly rates
    int season_label = 0;   // calendar year the epidemic is attributed to

    std::size_t duration() const { return weekly_rates.size(); }
};

struct EpidemicFeatures {
    double y1 = 0.0;
    double y2 = 0.0;
    double y3 = 0.0;
    double size = 0.0;
    bool has_week3 = false;  // false for epidemics shorter than 3 weeks
    int season_label = 0;
};

enum class EndRule {
    kSerfling,          // end = last week of the enclosing Serfling episode
    kThresholdFallback  // end = last week of the maximal run above start_threshold
};

// Start = first of the first two consecutive weeks strictly above
// start_threshold; at most one epidemic per influenza season.
// With EndRule::kSerfling a baseline (one bound per week) is required.
std::vector<Epidemic> segment_epidemics(const IncidenceSeries& series,
                                        double start_threshold,
                                        EndRule end_rule,
                                        const std::vector<double>* serfling_bound = nullptr);

EpidemicFeatures epidemic_features(const Epidemic& e);

}  // namespace evt
