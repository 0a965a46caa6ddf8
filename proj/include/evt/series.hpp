#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace evt {

struct WeeklyRecord {
    int iso_year = 0;
    int iso_week = 0;  // 1..53
    double rate = 0.0; // ILI incidence per 100,000 per week
};

struct IncidenceSeries {
    std::vector<WeeklyRecord> records;

    std::vector<double> rates() const;
    std::size_t size() const { return records.size(); }
};

// Accepts a header line followed by rows "YYYYWww,rate" or "year,week,rate".
// Rows must be strictly increasing in (year, week) and have rate >= 0.
IncidenceSeries parse_series(std::string_view csv);

IncidenceSeries load_series(const std::string& path);

}  // namespace evt
