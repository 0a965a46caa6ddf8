// Acceptance harness: one PASS/FAIL line per criterion, exit code equal to
// the number of failed criteria. Criteria that depend on the real Sentinelles
// surveillance series run only when EVT_SENTINELLES_CSV points at it; without
// the data they fail with an explanation rather than being skipped or faked.
//
// Optional flag: --full-scale runs the simulation assessment with 1500
// datasets instead of the 300-dataset desk scale.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "evt/anomaly.hpp"
#include "evt/assess.hpp"
#include "evt/mvgp.hpp"
#include "evt/predict.hpp"
#include "evt/rng.hpp"
#include "evt/segment.hpp"
#include "evt/serfling.hpp"
#include "evt/series.hpp"
#include "evt/simulate.hpp"
#include "evt/stats.hpp"
#include "evt/unigp.hpp"

using namespace evt;

namespace {

struct Check {
    bool ok;
    std::string note;
};

struct Criterion {
    std::vector<Check> checks;

    void expect(bool ok, const std::string& note) { checks.push_back({ok, note}); }

    void expect_near(double got, double want, double rel_tol, const std::string& what,
                     double abs_tol = 0.0) {
        const double err = std::abs(got - want);
        const bool ok = err <= std::max(rel_tol * std::abs(want), abs_tol);
        std::ostringstream ss;
        ss << what << ": got " << got << ", reference " << want;
        checks.push_back({ok, ss.str()});
    }

    bool passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.ok; });
    }
};

void report(int index, const std::string& title, const Criterion& c) {
    std::cout << "CRITERION " << index << ": " << (c.passed() ? "PASS" : "FAIL") << " - "
              << title << '\n';
    for (const auto& check : c.checks)
        if (!check.ok) std::cout << "    failed: " << check.note << '\n';
    std::cout.flush();
}

MvGpModel week3_model() {
    MvGpModel m;
    m.family.kind = GeneratorKind::kGumbel;
    m.family.alpha = {2.22, 10.37, 3.21};
    m.family.beta = {0.0, 0.84, 0.59};
    m.marginal_scales = {72.0, 256.0, 392.0};
    m.thresholds = {339.0, 339.0, 339.0};
    return m;
}

MvGpModel size_model() {
    MvGpModel m;
    m.family.kind = GeneratorKind::kGumbel;
    m.family.alpha = {2.22, 38.77, 1.76};
    m.family.beta = {0.0, 0.89, -0.70};
    m.marginal_scales = {72.0, 256.0, 1428.0};
    m.thresholds = {339.0, 339.0, 4144.0};
    return m;
}

struct RealData {
    IncidenceSeries series;
    std::vector<EpidemicFeatures> features;
};

// The published analyses use the Sentinelles ILI series (1985-2019), which
// is not redistributable with this repository and could not be fetched in
// this build environment. Provide it via EVT_SENTINELLES_CSV to run the
// data-dependent criteria.
std::optional<RealData> load_real_data(std::string* why) {
    const char* path = std::getenv("EVT_SENTINELLES_CSV");
    if (path == nullptr || *path == '\0') {
        *why = "real surveillance series unavailable (set EVT_SENTINELLES_CSV to run)";
        return std::nullopt;
    }
    try {
        RealData d;
        d.series = load_series(path);
        const double threshold = empirical_quantile(d.series.rates(), 0.88);
        const auto bound = serfling_baseline(d.series);
        for (const auto& e : segment_epidemics(d.series, threshold, EndRule::kSerfling, &bound))
            d.features.push_back(epidemic_features(e));
        return d;
    } catch (const std::exception& e) {
        *why = std::string("failed to load real series: ") + e.what();
        return std::nullopt;
    }
}

std::vector<double> positive_excesses(const std::vector<double>& v, double u) {
    std::vector<double> out;
    for (double x : v)
        if (x > u) out.push_back(x - u);
    return out;
}

// ---- criterion 1: univariate return levels ------------------------------

Criterion criterion_return_levels() {
    Criterion c;
    UnivariateGpFit rate;
    rate.threshold = 339.0;
    rate.sigma = 392.0;
    rate.gamma_fixed = true;
    rate.exceed_freq = 0.88;
    UnivariateGpFit size;
    size.threshold = 4144.0;
    size.sigma = 1428.0;
    size.gamma_fixed = true;
    size.exceed_freq = 0.41;

    const struct {
        const UnivariateGpFit* fit;
        double alpha;
        int n;
        double want;
    } cases[] = {
        {&rate, 0.9, 1, 1192.0},  {&rate, 0.99, 1, 2094.0},
        {&rate, 0.9, 10, 2076.0}, {&rate, 0.99, 10, 2994.0},
        {&size, 0.9, 1, 6165.0},  {&size, 0.99, 1, 9452.0},
        {&size, 0.9, 10, 9385.0}, {&size, 0.99, 10, 12733.0},
    };
    for (const auto& k : cases) {
        std::ostringstream what;
        what << "level(alpha=" << k.alpha << ", n=" << k.n << ", u=" << k.fit->threshold << ")";
        c.expect_near(return_level(*k.fit, {k.alpha, k.n}), k.want, 0.005, what.str());
    }
    return c;
}

// ---- criterion 2: exponential tail scales on the real data --------------

Criterion criterion_exponential_fits(const std::optional<RealData>& data,
                                     const std::string& why) {
    Criterion c;
    if (!data) {
        c.expect(false, why);
        return c;
    }
    const double u_rate = 339.0;
    const double u_size = 4144.0;
    std::vector<double> y1, y2, y3, sizes;
    for (const auto& f : data->features) {
        y1.push_back(f.y1);
        y2.push_back(f.y2);
        if (f.has_week3) y3.push_back(f.y3);
        sizes.push_back(f.size);
    }
    const struct {
        std::vector<double>* values;
        double u;
        double want_sigma;
        int want_n;
        const char* name;
    } cases[] = {
        {&y1, u_rate, 72.0, 30, "week1"},
        {&y2, u_rate, 256.0, 30, "week2"},
        {&y3, u_rate, 392.0, 30, "week3"},
        {&sizes, u_size, 1428.0, 14, "size"},
    };
    for (const auto& k : cases) {
        const auto ex = positive_excesses(*k.values, k.u);
        if (ex.size() < 2) {
            c.expect(false, std::string(k.name) + ": fewer than 2 excesses");
            continue;
        }
        const auto fit = fit_exponential(ex);
        c.expect_near(fit.sigma, k.want_sigma, 0.02, std::string(k.name) + " sigma");
        c.expect(fit.n_excess == k.want_n,
                 std::string(k.name) + " excess count: got " + std::to_string(fit.n_excess) +
                     ", reference " + std::to_string(k.want_n));
    }
    return c;
}

// ---- criterion 3: trivariate fits on the real data ----------------------

Criterion criterion_mv_fits(const std::optional<RealData>& data, const std::string& why) {
    Criterion c;
    if (!data) {
        c.expect(false, why);
        return c;
    }
    const struct {
        bool use_size;
        MvGpModel reference;
        std::array<double, 3> want_aic;  // gumbel, reverse exponential, reverse Gumbel
        const char* name;
    } targets[] = {
        {false, week3_model(), {194.0, 2189.0, 208.0}, "week3"},
        {true, size_model(), {227.0, 2240.0, 268.0}, "size"},
    };
    for (const auto& t : targets) {
        std::vector<Vec3> raw;
        for (const auto& f : data->features) {
            if (!t.use_size && !f.has_week3) continue;
            raw.push_back({f.y1, f.y2, t.use_size ? f.size : f.y3});
        }
        Vec3 scales;
        bool scales_ok = true;
        for (int j = 0; j < 3; ++j) {
            std::vector<double> col;
            for (const auto& r : raw) col.push_back(r[j]);
            const auto ex = positive_excesses(col, t.reference.thresholds[j]);
            if (ex.size() < 2) { scales_ok = false; break; }
            scales[j] = mean(ex);
        }
        if (!scales_ok) {
            c.expect(false, std::string(t.name) + ": too few excesses for scales");
            continue;
        }
        const auto vectors = standardize(raw, t.reference.thresholds, scales);
        const auto fit = fit_mvgp(vectors, GeneratorKind::kGumbel);
        for (int j = 0; j < 3; ++j) {
            c.expect_near(fit.family.alpha[j], t.reference.family.alpha[j], 0.05,
                          std::string(t.name) + " alpha[" + std::to_string(j) + "]");
            if (j > 0)
                c.expect_near(fit.family.beta[j], t.reference.family.beta[j], 0.05,
                              std::string(t.name) + " beta[" + std::to_string(j) + "]");
        }
        const auto selection = model_selection(vectors);
        for (const auto& row : selection) {
            const int idx = row.kind == GeneratorKind::kGumbel               ? 0
                            : row.kind == GeneratorKind::kReverseExponential ? 1
                                                                             : 2;
            c.expect(row.ok && std::abs(row.aic - t.want_aic[idx]) <= 2.0,
                     std::string(t.name) + " AIC " + to_string(row.kind) + ": got " +
                         std::to_string(row.aic) + ", reference " +
                         std::to_string(t.want_aic[idx]));
        }
        const auto ladder = simplify_ladder(vectors, GeneratorKind::kGumbel);
        for (const auto& row : ladder) {
            if (!row.p_value_vs_m1) continue;
            c.expect(*row.p_value_vs_m1 < 1e-3,
                     std::string(t.name) + " " + to_string(row.submodel) +
                         " simplification p-value: " + std::to_string(*row.p_value_vs_m1));
        }
    }
    return c;
}

// ---- criterion 4: real-time prediction reference values -----------------

Criterion criterion_prediction() {
    Criterion c;
    const double y1 = 366.0, y2 = 540.0;
    const struct {
        MvGpModel model;
        std::array<double, 4> levels;
        std::array<double, 4> want;
        const char* name;
    } cases[] = {
        {week3_model(), {816.0, 1224.0, 1551.0, 1632.0}, {0.185, 0.012, 0.001, 0.0007}, "week3"},
        {size_model(), {4031.0, 6046.0, 7659.0, 8062.0}, {0.026, 0.008, 0.003, 0.002}, "size"},
    };
    for (const auto& k : cases) {
        for (int i = 0; i < 4; ++i) {
            const double p = predict_level(k.model, {y1, y2, k.levels[i], 0.33});
            std::ostringstream what;
            what << k.name << " P(exceed " << k.levels[i] << ")";
            // +-15% relative or +-0.002 absolute, whichever is larger.
            c.expect_near(p, k.want[i], 0.15, what.str(), 0.002);
        }
    }
    return c;
}

// ---- criterion 5: anomaly calibration ------------------------------------

Criterion criterion_anomaly(const std::optional<RealData>& data, const std::string& why) {
    Criterion c;
    auto model = week3_model();
    CalibrationConfig cfg;
    cfg.sim.seed = 11;
    cfg.sim.n_datasets = 1500;
    const auto cal = calibrate(model, cfg);
    const std::array<std::pair<double, double>, 4> want{
        {{0.10, 4.72}, {0.05, 5.60}, {0.01, 7.79}, {0.001, 14.50}}};
    for (const auto& [level, cutoff] : want) {
        std::ostringstream what;
        what << "NLL cutoff at level " << level;
        c.expect_near(cal.cutoffs.at(level), cutoff, 0.10, what.str());
    }

    // Constructed points: (i) a typical vector with its third component
    // raised to the 0.99 quantile of simulated third components; (ii) the
    // same vector with first and third components scaled by 1.5 and the
    // second by 0.5. Only (ii) should be flagged at the 0.1% level.
    const auto sims = sample_gp(model, 20000, 77);
    std::vector<double> x1s, x2s, x3s;
    for (const auto& x : sims) {
        x1s.push_back(x[0]);
        x2s.push_back(x[1]);
        x3s.push_back(x[2]);
    }
    const ExcessVector point_i{empirical_quantile(x1s, 0.5), empirical_quantile(x2s, 0.5),
                               empirical_quantile(x3s, 0.99)};
    const ExcessVector point_ii{1.5 * point_i[0], 0.5 * point_i[1], 1.5 * point_i[2]};
    const auto v_ii = test_anomaly(model, cal, point_ii);
    const auto flagged_at = [](const AnomalyVerdict& v, double level) {
        return std::find(v.flagged_levels.begin(), v.flagged_levels.end(), level) !=
               v.flagged_levels.end();
    };
    c.expect(flagged_at(v_ii, 0.001), "anomalous point not flagged at 0.1% (nll " +
                                          std::to_string(v_ii.nll) + ")");

    // The 2009-10 pandemic epidemic should look unremarkable at the 1% level.
    if (!data) {
        c.expect(false, "pandemic-season check needs the real series: " + why);
    } else {
        bool found = false;
        for (const auto& f : data->features) {
            if (f.season_label != 2009 || !f.has_week3) continue;
            found = true;
            const Vec3 raw{f.y1, f.y2, f.y3};
            const auto std_vecs =
                standardize({raw}, model.thresholds, model.marginal_scales);
            if (std_vecs.empty()) break;  // below all thresholds: trivially not anomalous
            const auto v = test_anomaly(model, cal, std_vecs[0]);
            c.expect(!flagged_at(v, 0.01), "2009-10 epidemic flagged at 1%");
        }
        if (!found) c.expect(false, "2009 season not found in the real series");
    }
    return c;
}

// ---- criterion 6: leave-one-out assessment on the real data -------------

Criterion criterion_loo(const std::optional<RealData>& data, const std::string& why) {
    Criterion c;
    if (!data) {
        c.expect(false, why);
        return c;
    }
    const struct {
        bool use_size;
        double base;
        Vec3 thresholds;
        std::array<double, 2> want_gp;
        std::array<double, 2> want_logistic;
        const char* name;
    } targets[] = {
        {false, 1632.0, {339.0, 339.0, 339.0}, {0.33, 0.69}, {0.06, 0.02}, "week3"},
        {true, 8062.0, {339.0, 339.0, 4144.0}, {0.44, 0.46}, {0.005, 0.002}, "size"},
    };
    for (const auto& t : targets) {
        std::vector<Vec3> feats;
        for (const auto& f : data->features) {
            if (!t.use_size && !f.has_week3) continue;
            feats.push_back({f.y1, f.y2, t.use_size ? f.size : f.y3});
        }
        LooConfig cfg;
        cfg.thresholds = t.thresholds;
        const std::vector<double> levels{0.5 * t.base, 0.75 * t.base};
        const auto res = loo_assess(feats, levels, cfg);
        for (std::size_t i = 0; i < levels.size(); ++i) {
            const auto it = std::find_if(res.scores.begin(), res.scores.end(),
                                         [&](const auto& s) { return s.level == levels[i]; });
            if (it == res.scores.end() || !it->gp_brier || !it->logistic_brier) {
                c.expect(false, std::string(t.name) + ": level not scored");
                continue;
            }
            c.expect_near(*it->gp_brier, t.want_gp[i], 0.0,
                          std::string(t.name) + " GP Brier", 0.08);
            c.expect_near(*it->logistic_brier, t.want_logistic[i], 0.0,
                          std::string(t.name) + " logistic Brier", 0.08);
        }
    }
    return c;
}

// ---- criterion 7: simulation assessment ----------------------------------

Criterion criterion_sim_assess(bool full_scale) {
    Criterion c;
    const int n_datasets = full_scale ? 1500 : 300;
    const struct {
        MvGpModel model;
        std::array<double, 4> levels;
        std::array<double, 4> want_brier;
        std::array<double, 4> want_ap;
        const char* name;
    } cases[] = {
        {week3_model(),
         {816.0, 1224.0, 1551.0, 1632.0},
         {0.72, 0.75, 0.80, 0.84},
         {0.92, 0.91, 0.93, 0.96},
         "week3"},
        {size_model(),
         {4031.0, 6046.0, 7659.0, 8062.0},
         {0.40, 0.51, 0.47, 0.44},
         {0.64, 0.71, 0.64, 0.60},
         "size"},
    };
    for (const auto& k : cases) {
        SimAssessConfig cfg;
        cfg.sim.seed = 1;
        cfg.sim.n_datasets = n_datasets;
        const std::vector<double> levels(k.levels.begin(), k.levels.end());
        const auto res = sim_assess(k.model, levels, cfg);
        for (std::size_t i = 0; i < levels.size(); ++i) {
            const auto& s = res.scores[i];
            const std::string tag = std::string(k.name) + " level " + std::to_string(k.levels[i]);
            if (!s.gp_brier || !s.gp_ap) {
                c.expect(false, tag + ": GP scores unavailable");
                continue;
            }
            c.expect_near(*s.gp_brier, k.want_brier[i], 0.0, tag + " GP Brier", 0.08);
            c.expect_near(*s.gp_ap, k.want_ap[i], 0.0, tag + " GP AP", 0.08);
            if (s.logistic_brier)
                c.expect(*s.logistic_brier < *s.gp_brier,
                         tag + ": logistic Brier not below GP");
            if (s.logistic_ap)
                c.expect(*s.logistic_ap < *s.gp_ap, tag + ": logistic AP not below GP");
        }
    }
    return c;
}

// ---- criterion 8: data-independent property suite -------------------------

double laplace_draw(CounterRng& rng, double scale) {
    const double u = rng.next_double() - 0.5;
    return -scale * std::copysign(std::log(1.0 - 2.0 * std::abs(u)), -u);
}

Criterion criterion_properties() {
    Criterion c;
    const auto model = week3_model();
    const GpDensity density(model.family);

    // Density normalization by importance sampling with a product Laplace
    // proposal; the integral over the positive-excess support must be 1.
    {
        CounterRng rng(1001);
        const int n = 200000;
        const double scale = 2.0;
        double sum = 0.0, sum_sq = 0.0;
        for (int i = 0; i < n; ++i) {
            ExcessVector x;
            double log_q = 0.0;
            for (int j = 0; j < 3; ++j) {
                x[j] = laplace_draw(rng, scale);
                log_q += -std::abs(x[j]) / scale - std::log(2.0 * scale);
            }
            double w = 0.0;
            if (is_positive_excess(x)) w = std::exp(density.log_density(x) - log_q);
            sum += w;
            sum_sq += w * w;
        }
        const double est = sum / n;
        const double se = std::sqrt((sum_sq / n - est * est) / n);
        c.expect(std::abs(est - 1.0) <= 3.0 * se,
                 "density normalization: " + std::to_string(est) + " +- " + std::to_string(se));
    }

    // Standard margins of the sampler are unit exponential given positivity.
    {
        GpSampler sampler(model.family);
        CounterRng rng(271828);
        std::array<std::vector<double>, 3> pos;
        for (int i = 0; i < 100000; ++i) {
            const auto x = sampler.sample(rng);
            for (int j = 0; j < 3; ++j)
                if (x[j] > 0.0) pos[j].push_back(x[j]);
        }
        for (int j = 0; j < 3; ++j) {
            std::sort(pos[j].begin(), pos[j].end());
            const double n = static_cast<double>(pos[j].size());
            double d = 0.0;
            for (std::size_t i = 0; i < pos[j].size(); ++i) {
                const double f = 1.0 - std::exp(-pos[j][i]);
                d = std::max(d, std::abs(f - static_cast<double>(i) / n));
                d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
            }
            const double lambda = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
            double p = 0.0;
            for (int k = 1; k <= 100; ++k)
                p += 2.0 * ((k % 2 == 1) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
            c.expect(p > 0.01, "margin " + std::to_string(j + 1) +
                                   " KS p-value: " + std::to_string(p));
        }
    }

    // Conditioning on components below threshold with a non-positive target
    // is certainty.
    c.expect(conditional_exceedance(model, -0.4, -1.0, 0.0) == 1.0,
             "both-below, non-positive target must be exactly 1");
    c.expect(conditional_exceedance(model, -0.4, -1.0, -2.0) == 1.0,
             "both-below, negative target must be exactly 1");

    // Conditional probabilities against a 1e7-draw binned brute-force oracle.
    {
        GpSampler sampler(model.family);
        CounterRng rng(314159);
        const int n = 10000000;
        const double half_width = 0.05;
        const struct {
            double x1, x2, v3;
        } probes[] = {{0.3, 0.5, 0.5}, {0.8, 0.2, 1.0}};
        long hits[2] = {0, 0}, exceeds[2] = {0, 0};
        for (int i = 0; i < n; ++i) {
            const auto x = sampler.sample(rng);
            for (int k = 0; k < 2; ++k) {
                if (std::abs(x[0] - probes[k].x1) < half_width &&
                    std::abs(x[1] - probes[k].x2) < half_width) {
                    ++hits[k];
                    if (x[2] > probes[k].v3) ++exceeds[k];
                }
            }
        }
        for (int k = 0; k < 2; ++k) {
            const double mc = static_cast<double>(exceeds[k]) / static_cast<double>(hits[k]);
            const double se = std::sqrt(mc * (1.0 - mc) / static_cast<double>(hits[k]));
            const double p = conditional_exceedance(model, probes[k].x1, probes[k].x2,
                                                    probes[k].v3);
            c.expect(std::abs(p - mc) <= 3.0 * se + 0.01,
                     "conditional probability vs MC: " + std::to_string(p) + " vs " +
                         std::to_string(mc) + " +- " + std::to_string(se));
        }
    }

    // Brier identities and perfect-ranking AP.
    {
        std::vector<PredictionRecord> base, perfect, ranked;
        for (int i = 0; i < 8; ++i) {
            const int y = i < 2 ? 1 : 0;
            base.push_back({0.25, y, 0.0, PredictorSource::kGp});
            perfect.push_back({static_cast<double>(y), y, 0.0, PredictorSource::kGp});
            ranked.push_back({1.0 - 0.1 * i, y, 0.0, PredictorSource::kGp});
        }
        c.expect(std::abs(brier_standardized(base)) < 1e-12, "base-rate Brier must be 0");
        c.expect(std::abs(brier_standardized(perfect) - 1.0) < 1e-12, "perfect Brier must be 1");
        c.expect(std::abs(average_precision(ranked) - 1.0) < 1e-12,
                 "perfect-ranking AP must be 1");
    }

    // Anomaly flag rate: on data simulated from the model itself, the flag
    // rate at level s stays within 2 binomial standard errors of s.
    {
        CalibrationConfig cfg;
        cfg.sim.seed = 501;
        cfg.sim.n_vectors = 13;
        cfg.sim.n_datasets = 400;
        const auto cal = calibrate(model, cfg);

        GpSampler sampler(model.family);
        FitOptions fit = cfg.fit;
        fit.init = model.family;
        const int n_test = 400;
        int flagged10 = 0, flagged5 = 0, evaluated = 0;
        for (int d = 0; d < n_test; ++d) {
            CounterRng rng(777, static_cast<std::uint64_t>(d));
            const auto data = sampler.sample_n(rng, cfg.sim.n_vectors);
            try {
                const std::vector<ExcessVector> train(data.begin(), data.end() - 1);
                const auto refit = fit_mvgp(train, model.family.kind, model.submodel, fit);
                const double nll = nll_at(refit, data.back());
                ++evaluated;
                if (nll > cal.cutoffs.at(0.10)) ++flagged10;
                if (nll > cal.cutoffs.at(0.05)) ++flagged5;
            } catch (const std::exception&) {
            }
        }
        for (const auto& [s, count] : {std::pair<double, int>{0.10, flagged10},
                                       std::pair<double, int>{0.05, flagged5}}) {
            const double rate = static_cast<double>(count) / evaluated;
            const double se = std::sqrt(s * (1.0 - s) / evaluated);
            c.expect(std::abs(rate - s) <= 2.0 * se,
                     "flag rate at " + std::to_string(s) + ": " + std::to_string(rate) +
                         " (se " + std::to_string(se) + ")");
        }
    }
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    bool full_scale = false;
    for (int i = 1; i < argc; ++i)
        if (std::string(argv[i]) == "--full-scale") full_scale = true;

    std::string why;
    const auto data = load_real_data(&why);

    int failures = 0;
    const auto run = [&](int index, const std::string& title, auto make) {
        Criterion c;
        try {
            c = make();
        } catch (const std::exception& e) {
            c.expect(false, std::string("unexpected exception: ") + e.what());
        }
        report(index, title, c);
        if (!c.passed()) ++failures;
    };

    run(1, "return levels reproduce the reference values",
        [] { return criterion_return_levels(); });
    run(2, "exponential tail scales on the surveillance series",
        [&] { return criterion_exponential_fits(data, why); });
    run(3, "trivariate model fits on the surveillance series",
        [&] { return criterion_mv_fits(data, why); });
    run(4, "real-time prediction probabilities for the 2019 epidemic",
        [] { return criterion_prediction(); });
    run(5, "anomaly-test calibration and verdicts",
        [&] { return criterion_anomaly(data, why); });
    run(6, "leave-one-out prediction quality on the surveillance series",
        [&] { return criterion_loo(data, why); });
    run(7, "prediction quality on simulated data",
        [&] { return criterion_sim_assess(full_scale); });
    run(8, "data-independent property suite", [] { return criterion_properties(); });

    std::cout << (failures == 0 ? "ALL CRITERIA PASSED" :
                                  std::to_string(failures) + " criteria failed") << '\n';
    return failures;
}
