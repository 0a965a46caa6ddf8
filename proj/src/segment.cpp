#include "evt/segment.hpp"

#include <numeric>

#include "evt/errors.hpp"

namespace evt {
namespace {

// Winter epidemics span the year boundary; attribute an epidemic starting
// in the second half of the year to the following calendar year.
int season_of(const WeeklyRecord& start) {
    return start.iso_week >= 27 ? start.iso_year + 1 : start.iso_year;
}

}  // namespace

std::vector<Epidemic> segment_epidemics(const IncidenceSeries& series,
                                        double start_threshold,
                                        EndRule end_rule,
                                        const std::vector<double>* serfling_bound) {
    if (start_threshold <= 0.0) throw DomainError("segment_epidemics: start_threshold must be > 0");
    if (end_rule == EndRule::kSerfling) {
        if (serfling_bound == nullptr) throw ConfigError("segment_epidemics: serfling end rule requires a baseline");
        if (serfling_bound->size() != series.size())
            throw ConfigError("segment_epidemics: baseline length mismatch");
    }

    const auto& rec = series.records;
    std::vector<Epidemic> out;
    int last_season = 0;
    std::size_t i = 0;
    while (i + 1 < rec.size()) {
        if (!(rec[i].rate > start_threshold && rec[i + 1].rate > start_threshold)) {
            ++i;
            continue;
        }
        const int season = season_of(rec[i]);
        if (!out.empty() && season == last_season) {
            ++i;
            continue;
        }

        std::size_t end = i + 1;
        if (end_rule == EndRule::kSerfling && rec[i].rate > (*serfling_bound)[i]) {
            while (end + 1 < rec.size() && rec[end + 1].rate > (*serfling_bound)[end + 1]) ++end;
        } else {
            while (end + 1 < rec.size() && rec[end + 1].rate > start_threshold) ++end;
        }

        Epidemic e;
        e.start_index = i;
        e.end_index = end;
        e.season_label = season;
        for (std::size_t k = i; k <= end; ++k) e.weekly_rates.push_back(rec[k].rate);
        e.size = std::accumulate(e.weekly_rates.begin(), e.weekly_rates.end(), 0.0);
        out.push_back(std::move(e));
        last_season = season;
        i = end + 1;
    }
    return out;
}

EpidemicFeatures epidemic_features(const Epidemic& e) {
    EpidemicFeatures f;
    f.season_label = e.season_label;
    f.size = e.size;
    f.y1 = e.weekly_rates.at(0);
    f.y2 = e.weekly_rates.at(1);
    f.has_week3 = e.weekly_rates.size() >= 3;
    f.y3 = f.has_week3 ? e.weekly_rates[2] : 0.0;
    return f;
}

}  // namespace evt
