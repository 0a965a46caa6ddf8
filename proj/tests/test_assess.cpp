#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "evt/assess.hpp"
#include "evt/errors.hpp"
#include "evt/rng.hpp"
#include "evt/simulate.hpp"

using namespace evt;

namespace {

MvGpModel week3_model() {
    MvGpModel m;
    m.family.kind = GeneratorKind::kGumbel;
    m.family.alpha = {2.22, 10.37, 3.21};
    m.family.beta = {0.0, 0.84, 0.59};
    m.marginal_scales = {72.0, 256.0, 392.0};
    m.thresholds = {339.0, 339.0, 339.0};
    return m;
}

std::vector<PredictionRecord> make_records(const std::vector<double>& p,
                                           const std::vector<int>& y) {
    std::vector<PredictionRecord> out;
    for (std::size_t i = 0; i < p.size(); ++i) out.push_back({p[i], y[i], 0.0, PredictorSource::kGp});
    return out;
}

}  // namespace

TEST_CASE("standardized Brier score identities and a worked example") {
    // Perfect prediction scores 1.
    auto perfect = make_records({1.0, 0.0, 1.0, 0.0}, {1, 0, 1, 0});
    CHECK(brier_standardized(perfect) == doctest::Approx(1.0));

    // Predicting the base rate everywhere scores exactly 0.
    auto base = make_records({0.25, 0.25, 0.25, 0.25}, {1, 0, 0, 0});
    CHECK(brier_standardized(base) == doctest::Approx(0.0).epsilon(1e-12));

    // Hand-computed: MSE = 0.025, outcome variance = 0.25 -> 0.9.
    auto ex = make_records({0.9, 0.1, 0.2, 0.8}, {1, 0, 0, 1});
    CHECK(brier_standardized(ex) == doctest::Approx(0.9));

    CHECK_THROWS_AS(brier_standardized(make_records({0.2, 0.3}, {0, 0})), DomainError);
    CHECK_THROWS_AS(brier_standardized(std::vector<PredictionRecord>{}), DomainError);
}

TEST_CASE("precision-recall curve and average precision on an enumerable case") {
    auto recs = make_records({0.9, 0.8, 0.7, 0.6}, {1, 0, 1, 0});
    auto curve = pr_curve(recs);
    REQUIRE(curve.size() == 4);
    CHECK(curve[0].precision == doctest::Approx(1.0));
    CHECK(curve[0].recall == doctest::Approx(0.5));
    CHECK(curve[1].precision == doctest::Approx(0.5));
    CHECK(curve[1].recall == doctest::Approx(0.5));
    CHECK(curve[2].precision == doctest::Approx(2.0 / 3.0));
    CHECK(curve[2].recall == doctest::Approx(1.0));
    CHECK(curve[3].precision == doctest::Approx(0.5));
    CHECK(curve[3].recall == doctest::Approx(1.0));
    // AP = 0.5 * 1 + 0 * 0.5 + 0.5 * 2/3 + 0 * 0.5.
    CHECK(average_precision(recs) == doctest::Approx(0.5 + 1.0 / 3.0));

    // A perfect ranking has AP exactly 1 regardless of class balance.
    auto ranked = make_records({0.9, 0.8, 0.3, 0.2, 0.1}, {1, 1, 0, 0, 0});
    CHECK(average_precision(ranked) == doctest::Approx(1.0));

    // Random scores give AP near the base rate.
    CounterRng rng(31);
    std::vector<double> p;
    std::vector<int> y;
    for (int i = 0; i < 20000; ++i) {
        p.push_back(rng.next_double());
        y.push_back(rng.next_double() < 0.15 ? 1 : 0);
    }
    CHECK(average_precision(make_records(p, y)) == doctest::Approx(0.15).epsilon(0.15));

    CHECK_THROWS_AS(pr_curve(make_records({0.2}, {0})), DomainError);
}

TEST_CASE("logistic regression recovers known coefficients") {
    CounterRng rng(17);
    const double b0 = -1.0, b1 = 0.8, b2 = -0.5;
    std::vector<std::array<double, 2>> cov;
    std::vector<int> y;
    for (int i = 0; i < 4000; ++i) {
        const double c1 = 4.0 * rng.next_double() - 2.0;
        const double c2 = 4.0 * rng.next_double() - 2.0;
        const double p = 1.0 / (1.0 + std::exp(-(b0 + b1 * c1 + b2 * c2)));
        cov.push_back({c1, c2});
        y.push_back(rng.next_double() < p ? 1 : 0);
    }
    auto m = fit_logistic(cov, y);
    CHECK(m.intercept == doctest::Approx(b0).epsilon(0.15));
    CHECK(m.slope_y1 == doctest::Approx(b1).epsilon(0.15));
    CHECK(m.slope_y2 == doctest::Approx(b2).epsilon(0.15));
    CHECK(predict_logistic(m, 0.0, 0.0) ==
          doctest::Approx(1.0 / (1.0 + std::exp(-m.intercept))).epsilon(1e-12));
}

TEST_CASE("logistic regression failure modes") {
    std::vector<std::array<double, 2>> cov;
    std::vector<int> y;
    for (int i = 0; i < 40; ++i) {
        const double c = static_cast<double>(i);
        cov.push_back({c, -c});
        y.push_back(i < 20 ? 0 : 1);  // perfectly separable
    }
    CHECK_THROWS_AS(fit_logistic(cov, y), FitError);
    CHECK_THROWS_AS(fit_logistic(cov, std::vector<int>(40, 1)), DomainError);
}

TEST_CASE("leave-one-out assessment on synthetic epidemics") {
    auto truth = week3_model();
    auto features = unstandardize(sample_gp(truth, 40, 555), truth);
    double max_y3 = 0.0;
    for (const auto& f : features) max_y3 = std::max(max_y3, f[2]);

    LooConfig cfg;
    cfg.thresholds = truth.thresholds;
    cfg.fit.n_starts = 2;
    cfg.fit.init = truth.family;
    const std::vector<double> levels{0.5 * max_y3, max_y3};
    auto loo = loo_assess(features, levels, cfg);

    REQUIRE(loo.scores.size() == 2);
    CHECK(loo.scores[0].level == doctest::Approx(0.5 * max_y3));
    // The maximum itself is never strictly exceeded, so that level is skipped.
    CHECK(loo.scores[1].skipped_reason.find("exceedance") != std::string::npos);
    CHECK(!loo.scores[1].gp_brier.has_value());

    REQUIRE(loo.scores[0].gp_brier.has_value());
    CHECK(*loo.scores[0].gp_brier <= 1.0);
    CHECK(loo.fold_errors.size() <= 4);

    // Every record's outcome agrees with the held-out feature and level.
    for (const auto& r : loo.records) {
        CHECK((r.outcome == 0 || r.outcome == 1));
        CHECK(r.p_hat >= 0.0);
        CHECK(r.p_hat <= 1.0);
    }

    CHECK_THROWS_AS(loo_assess({features[0], features[1]}, levels, cfg), DomainError);
}

TEST_CASE("simulation assessment structure at a small scale") {
    auto truth = week3_model();
    SimAssessConfig cfg;
    cfg.sim.seed = 21;
    cfg.sim.n_vectors = 13;
    cfg.sim.n_datasets = 40;
    const double base = truth.thresholds[2] + 2.0 * truth.marginal_scales[2];
    const std::vector<double> levels{0.6 * base, base};

    auto res = sim_assess(truth, levels, cfg);
    CHECK(res.n_failed_fits <= 2);
    REQUIRE(res.scores.size() == 2);
    for (const auto& s : res.scores) {
        // The true-parameter predictor is always evaluable at this scale.
        CHECK(s.true_brier.has_value());
        if (s.gp_brier) CHECK(*s.gp_brier <= 1.0);
        if (s.gp_ap) {
            CHECK(*s.gp_ap >= 0.0);
            CHECK(*s.gp_ap <= 1.0);
        }
        CHECK(s.gp_quartiles.size() <= 2);
        for (const auto& q : s.gp_quartiles) {
            CHECK(q.q25 <= q.median);
            CHECK(q.median <= q.q75);
            CHECK(q.proportion > 0.0);
            CHECK(q.proportion <= 1.0);
        }
    }
    // Each surviving dataset contributes gp and true records per level.
    const long expected = static_cast<long>(cfg.sim.n_datasets - res.n_failed_fits) * 2;
    long gp_records = 0, true_records = 0;
    for (const auto& r : res.records) {
        if (r.source == PredictorSource::kGp) ++gp_records;
        if (r.source == PredictorSource::kTrueModel) ++true_records;
    }
    CHECK(gp_records == expected);
    CHECK(true_records == expected);

    SimAssessConfig bad = cfg;
    bad.sim.n_vectors = 5;
    CHECK_THROWS_AS(sim_assess(truth, levels, bad), ConfigError);
}
