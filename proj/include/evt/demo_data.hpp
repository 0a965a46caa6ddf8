#pragma once

#include <cstdint>
#include <string>

#include "evt/series.hpp"

namespace evt {

// Deterministic synthetic weekly ILI-like series, Jan 1985 - Feb 2019:
// a noisy off-season floor plus one winter outbreak per season with
// seeded amplitude, timing and width. It is NOT the Sentinelles data; it
// exists so the pipeline can be exercised end to end without the real
// series (see README, data availability).
IncidenceSeries demo_series(std::uint64_t seed = 8501);

std::string demo_series_csv(std::uint64_t seed = 8501);

}  // namespace evt
