#include "evt/demo_data.hpp"

#include <cmath>
#include <sstream>

#include "evt/rng.hpp"

namespace evt {
namespace {

int weeks_in_year(int year) {
    // ISO 8601: years starting on Thursday, or leap years starting on
    // Wednesday, have 53 weeks.
    auto dow_jan1 = [](int y) {
        const int a = (y - 1) % 7;
        const int leaps = (y - 1) / 4 - (y - 1) / 100 + (y - 1) / 400;
        return (1 + a + leaps) % 7;  // 0 = Sunday
    };
    const int d = dow_jan1(year);
    const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    return (d == 4 || (leap && d == 3)) ? 53 : 52;
}

}  // namespace

IncidenceSeries demo_series(std::uint64_t seed) {
    CounterRng rng(seed);
    IncidenceSeries series;

    // Per-season outbreak shape parameters, drawn once per winter.
    struct Outbreak {
        double peak_week;  // absolute week index of the peak
        double amplitude;
        double width;
    };

    // Absolute week index (0 = 1985-W01) of the start of each year.
    auto year_start = [&](int year) {
        double idx = 0.0;
        for (int y = 1985; y < year; ++y) idx += weeks_in_year(y);
        for (int y = year; y < 1985; ++y) idx -= weeks_in_year(y);
        return idx;
    };

    double week_index = 0.0;
    std::vector<Outbreak> outbreaks;
    for (int year = 1984; year <= 2018; ++year) {
        CounterRng r = rng.substream(static_cast<std::uint64_t>(year));
        Outbreak o;
        // Peak lands between ISO week 50 of `year` and week 9 of the next.
        o.peak_week = year_start(year) + 49.0 + 11.0 * r.next_double();
        o.amplitude = 350.0 + 1450.0 * std::pow(r.next_double(), 1.6);
        o.width = 1.6 + 1.2 * r.next_double();
        outbreaks.push_back(o);
    }

    for (int year = 1985; year <= 2019; ++year) {
        const int nweeks = year == 2019 ? 8 : weeks_in_year(year);
        for (int week = 1; week <= nweeks; ++week) {
            CounterRng r = rng.substream(1000000ULL * year + week);
            double rate = 35.0 + 40.0 * r.next_double();
            for (const auto& o : outbreaks) {
                const double d = (week_index - o.peak_week) / o.width;
                if (std::abs(d) < 6.0) rate += o.amplitude * std::exp(-0.5 * d * d);
            }
            series.records.push_back({year, week, std::round(rate * 10.0) / 10.0});
            week_index += 1.0;
        }
    }
    return series;
}

std::string demo_series_csv(std::uint64_t seed) {
    const IncidenceSeries s = demo_series(seed);
    std::ostringstream out;
    out << "year,week,rate\n";
    for (const auto& r : s.records)
        out << r.iso_year << ',' << r.iso_week << ',' << r.rate << '\n';
    return out.str();
}

}  // namespace evt
