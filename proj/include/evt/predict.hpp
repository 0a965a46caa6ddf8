#pragma once

#include <vector>

#include "evt/mvgp.hpp"

namespace evt {

struct PredictionQuery {
    double y1 = 0.0;  // observed Week 1 value, original units
    double y2 = 0.0;  // observed Week 2 value, original units
    double level = 0.0;               // target level, original units, > u3
    double below_threshold_prob = 0.0;  // empirical P(Y3 > u3 | Y1 <= u1, Y2 <= u2)
};

// P[X3 > v3 | X1 = x1, X2 = x2] for a positive excess vector, in
// standardized units. Covers the three threshold cases: conditioning
// components not both below 0, both below with v3 > 0, and both below
// with v3 <= 0 (exactly 1).
double conditional_exceedance(const MvGpModel& model, double x1, double x2, double v3);

// Original-unit prediction: standardizes (y1, y2, level); when neither
// early component exceeds its threshold the conditional probability is
// multiplied by query.below_threshold_prob.
double predict_level(const MvGpModel& model, const PredictionQuery& query);

// Empirical fraction of historical (y1, y2, y3) rows with y1, y2 at or
// below their thresholds whose third component exceeds its threshold.
double below_threshold_prob(const std::vector<Vec3>& history, const Vec3& thresholds);

}  // namespace evt
