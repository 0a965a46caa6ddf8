// Command line front end for the epidemic tail-modeling pipeline.
//
// Subcommands: demo-data, segment, fit-uni, return-levels, fit-mvgp,
// predict, anomaly, simulate, assess. Each writes a JSON report with a
// schema version, the resolved configuration, the seed and a single
// timestamp field; byte-identical reruns differ only in that field.
//
// Exit codes: 0 success, 2 domain/config/parse errors, 3 numeric errors.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "evt/anomaly.hpp"
#include "evt/assess.hpp"
#include "evt/demo_data.hpp"
#include "evt/errors.hpp"
#include "evt/model_io.hpp"
#include "evt/mvgp.hpp"
#include "evt/predict.hpp"
#include "evt/segment.hpp"
#include "evt/serfling.hpp"
#include "evt/series.hpp"
#include "evt/simulate.hpp"
#include "evt/stats.hpp"
#include "evt/unigp.hpp"

using nlohmann::json;

namespace {

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::uint64_t resolve_seed(const CLI::Option* seed_opt, std::uint64_t flag_value) {
    if (seed_opt->count() > 0) return flag_value;
    if (const char* env = std::getenv("EVT_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw evt::ConfigError("EVT_SEED is not an unsigned integer: " + std::string(env));
        }
    }
    return flag_value;
}

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw evt::ConfigError("cannot read config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw evt::ConfigError("config is not valid JSON: " + std::string(e.what()));
    }
    if (!j.is_object()) throw evt::ConfigError("config root must be a JSON object");
    return j;
}

// Config file supplies values for flags the user did not pass explicitly.
template <typename T>
void config_default(const CLI::Option* opt, const json& cfg, const char* key, T& value) {
    if (opt->count() > 0 || !cfg.contains(key)) return;
    try {
        value = cfg.at(key).get<T>();
    } catch (const json::exception& e) {
        throw evt::ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

void write_report(const std::string& path, const std::string& subcommand, json config,
                  std::uint64_t seed, json payload) {
    json report{
        {"schema_version", "1"},
        {"subcommand", subcommand},
        {"generated_at", iso_timestamp()},
        {"seed", seed},
        {"config", std::move(config)},
        {"result", std::move(payload)},
    };
    std::ofstream out(path);
    if (!out) throw evt::DomainError("cannot write report: " + path);
    out << report.dump(2) << '\n';
    std::cerr << "wrote " << path << '\n';
}

struct FeatureRow {
    int season = 0;
    double y1 = 0.0, y2 = 0.0, y3 = 0.0, size = 0.0;
    bool has_week3 = false;
};

std::vector<FeatureRow> load_features(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw evt::DomainError("cannot read features file: " + path);
    std::vector<FeatureRow> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || !(std::isdigit(static_cast<unsigned char>(line[0])) || line[0] == '-'))
            continue;
        FeatureRow r;
        char c = 0;
        int has = 0;
        std::istringstream ss(line);
        if (!(ss >> r.season >> c >> r.y1 >> c >> r.y2 >> c >> r.y3 >> c >> r.size >> c >> has))
            throw evt::ParseError("malformed feature row", line_no);
        r.has_week3 = has != 0;
        rows.push_back(r);
    }
    if (rows.empty()) throw evt::DomainError("features file has no data rows: " + path);
    return rows;
}

void write_features_csv(const std::string& path, const std::vector<evt::EpidemicFeatures>& feats) {
    std::ofstream out(path);
    if (!out) throw evt::DomainError("cannot write features file: " + path);
    out << "season,y1,y2,y3,size,has_week3\n";
    for (const auto& f : feats)
        out << f.season_label << ',' << f.y1 << ',' << f.y2 << ',' << f.y3 << ',' << f.size
            << ',' << (f.has_week3 ? 1 : 0) << '\n';
}

evt::MvGpModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw evt::DomainError("cannot read model file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw evt::DomainError("model file is not valid JSON: " + std::string(e.what()));
    }
    try {
        return evt::model_from_json(j);
    } catch (const json::exception& e) {
        throw evt::DomainError("model file schema violation: " + std::string(e.what()));
    }
}

// Week columns share one threshold from the full weekly series; the size
// column gets its own from the per-epidemic sizes.
struct TargetData {
    std::vector<evt::Vec3> raw;       // (y1, y2, target)
    evt::Vec3 thresholds{0, 0, 0};
    bool is_size = false;
};

TargetData build_target(const std::vector<FeatureRow>& rows, const std::string& target,
                        double rate_threshold, double size_quantile) {
    TargetData t;
    t.is_size = target == "size";
    if (!t.is_size && target != "week3")
        throw evt::ConfigError("target must be week3 or size, got " + target);
    std::vector<double> sizes;
    for (const auto& r : rows) sizes.push_back(r.size);
    const double size_threshold = evt::empirical_quantile(sizes, size_quantile);
    for (const auto& r : rows) {
        if (!t.is_size && !r.has_week3) continue;
        t.raw.push_back({r.y1, r.y2, t.is_size ? r.size : r.y3});
    }
    t.thresholds = {rate_threshold, rate_threshold, t.is_size ? size_threshold : rate_threshold};
    return t;
}

json fit_summary(const evt::UnivariateGpFit& f) {
    return {{"threshold", f.threshold}, {"exceed_freq", f.exceed_freq},
            {"sigma", f.sigma},         {"sigma_ci", {f.sigma_ci.first, f.sigma_ci.second}},
            {"gamma", f.gamma},         {"gamma_fixed", f.gamma_fixed},
            {"loglik", f.log_lik},      {"n_excess", f.n_excess}};
}

// Scales for standardization: per-component exponential fit of the
// positive excesses over the shared thresholds.
evt::Vec3 estimate_scales(const std::vector<evt::Vec3>& raw, const evt::Vec3& thresholds) {
    evt::Vec3 scales{1.0, 1.0, 1.0};
    for (int j = 0; j < 3; ++j) {
        std::vector<double> exc;
        for (const auto& y : raw)
            if (y[j] > thresholds[j]) exc.push_back(y[j] - thresholds[j]);
        if (exc.size() < 2)
            throw evt::FitError("component " + std::to_string(j + 1) +
                                " has fewer than 2 positive excesses");
        scales[j] = evt::fit_exponential(exc).sigma;
    }
    return scales;
}

int run(int argc, char** argv) {
    CLI::App app{"Extreme value modeling of weekly epidemic surveillance series"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file; flags override its values")
        ->expected(1);

    std::uint64_t seed = 1;

    // demo-data ----------------------------------------------------------
    auto* cmd_demo = app.add_subcommand("demo-data", "write the bundled synthetic series");
    std::string demo_out = "demo.csv";
    cmd_demo->add_option("--output", demo_out, "output CSV path");
    auto* demo_seed_opt = cmd_demo->add_option("--seed", seed, "generator seed");

    // segment ------------------------------------------------------------
    auto* cmd_seg = app.add_subcommand("segment", "split a weekly series into epidemics");
    std::string seg_input, seg_report = "segment_report.json", seg_features = "features.csv";
    double start_quantile = 0.88;
    auto* seg_input_opt = cmd_seg->add_option("--input", seg_input, "weekly series CSV");
    cmd_seg->add_option("--report", seg_report, "report path");
    cmd_seg->add_option("--features", seg_features, "features CSV artifact path");
    auto* seg_q_opt =
        cmd_seg->add_option("--start-quantile", start_quantile, "epidemic start quantile");

    // fit-uni --------------------------------------------------------------
    auto* cmd_uni = app.add_subcommand("fit-uni", "univariate tail fits per component");
    std::string uni_input, uni_features, uni_report = "fit_uni_report.json";
    double rate_q = 0.9, size_q = 0.6;
    auto* uni_input_opt = cmd_uni->add_option("--input", uni_input, "weekly series CSV");
    auto* uni_feat_opt = cmd_uni->add_option("--features", uni_features, "features CSV");
    cmd_uni->add_option("--report", uni_report, "report path");
    auto* uni_rate_opt =
        cmd_uni->add_option("--rate-threshold-quantile", rate_q, "weekly-rate threshold quantile");
    auto* uni_size_opt =
        cmd_uni->add_option("--size-threshold-quantile", size_q, "size threshold quantile");

    // return-levels --------------------------------------------------------
    auto* cmd_rl = app.add_subcommand("return-levels", "levels exceeded with given probability");
    double rl_u = 0.0, rl_sigma = 1.0, rl_pu = 1.0;
    std::vector<double> rl_alphas{0.9, 0.99};
    std::vector<int> rl_horizons{1, 10};
    std::string rl_report = "return_levels_report.json";
    cmd_rl->add_option("--u", rl_u, "threshold")->required();
    cmd_rl->add_option("--sigma", rl_sigma, "exponential scale")->required();
    cmd_rl->add_option("--pu", rl_pu, "exceedance frequency")->required();
    cmd_rl->add_option("--alpha", rl_alphas, "non-exceedance probabilities");
    cmd_rl->add_option("--n", rl_horizons, "episodes per horizon");
    cmd_rl->add_option("--report", rl_report, "report path");

    // fit-mvgp --------------------------------------------------------------
    auto* cmd_mv = app.add_subcommand("fit-mvgp", "fit the trivariate tail model");
    std::string mv_input, mv_features, mv_target = "week3", mv_family = "gumbel";
    std::string mv_model_out = "model.json", mv_report = "fit_mvgp_report.json";
    double mv_rate_q = 0.9, mv_size_q = 0.6;
    int mv_starts = 10;
    auto* mv_input_opt = cmd_mv->add_option("--input", mv_input, "weekly series CSV");
    auto* mv_feat_opt = cmd_mv->add_option("--features", mv_features, "features CSV");
    auto* mv_target_opt = cmd_mv->add_option("--target", mv_target, "week3 or size");
    auto* mv_family_opt = cmd_mv->add_option("--family", mv_family,
                                             "gumbel, revexp or revgumbel");
    cmd_mv->add_option("--model-out", mv_model_out, "fitted model JSON path");
    cmd_mv->add_option("--report", mv_report, "report path");
    auto* mv_rate_opt =
        cmd_mv->add_option("--rate-threshold-quantile", mv_rate_q, "weekly-rate quantile");
    auto* mv_size_opt =
        cmd_mv->add_option("--size-threshold-quantile", mv_size_q, "size quantile");
    cmd_mv->add_option("--starts", mv_starts, "optimizer restarts");
    auto* mv_seed_opt = cmd_mv->add_option("--seed", seed, "restart stream seed");

    // predict ----------------------------------------------------------------
    auto* cmd_pred = app.add_subcommand("predict", "exceedance probabilities for a new epidemic");
    std::string pred_model, pred_features, pred_report = "predict_report.json";
    double pred_y1 = 0.0, pred_y2 = 0.0;
    std::vector<double> pred_kappas{0.5, 0.75, 0.95, 1.0};
    std::vector<double> pred_levels;
    cmd_pred->add_option("--model", pred_model, "fitted model JSON")->required();
    auto* pred_feat_opt =
        cmd_pred->add_option("--features", pred_features, "historical features CSV");
    cmd_pred->add_option("--y1", pred_y1, "observed Week 1 value")->required();
    cmd_pred->add_option("--y2", pred_y2, "observed Week 2 value")->required();
    auto* pred_k_opt = cmd_pred->add_option("--kappa", pred_kappas,
                                            "levels as multiples of the historical maximum");
    cmd_pred->add_option("--level", pred_levels, "explicit levels in original units");
    cmd_pred->add_option("--report", pred_report, "report path");

    // anomaly ------------------------------------------------------------------
    auto* cmd_anom = app.add_subcommand("anomaly", "calibrate the NLL test and score points");
    std::string anom_model, anom_report = "anomaly_report.json";
    int anom_datasets = 1500, anom_threads = 0;
    std::vector<double> anom_point_values;
    cmd_anom->add_option("--model", anom_model, "fitted model JSON")->required();
    auto* anom_n_opt = cmd_anom->add_option("--n-datasets", anom_datasets, "simulated datasets");
    auto* anom_seed_opt = cmd_anom->add_option("--seed", seed, "simulation seed");
    cmd_anom->add_option("--threads", anom_threads, "0 = library default, 1 = serial");
    cmd_anom->add_option("--point", anom_point_values,
                         "standardized x1 x2 x3 to score; repeatable");
    cmd_anom->add_option("--report", anom_report, "report path");

    // simulate ------------------------------------------------------------------
    auto* cmd_sim = app.add_subcommand("simulate", "draw positive excess vectors from a model");
    std::string sim_model, sim_out = "simulated.csv", sim_report = "simulate_report.json";
    int sim_n = 33;
    bool sim_original_units = false;
    cmd_sim->add_option("--model", sim_model, "fitted model JSON")->required();
    auto* sim_n_opt = cmd_sim->add_option("--n", sim_n, "number of vectors");
    auto* sim_seed_opt = cmd_sim->add_option("--seed", seed, "stream seed");
    cmd_sim->add_flag("--original-units", sim_original_units, "write y = u + scale * x");
    cmd_sim->add_option("--output", sim_out, "output CSV path");
    cmd_sim->add_option("--report", sim_report, "report path");

    // assess --------------------------------------------------------------------
    auto* cmd_ass = app.add_subcommand("assess", "prediction quality scores");
    std::string ass_mode = "loo", ass_model, ass_features, ass_input;
    std::string ass_report = "assess_report.json";
    std::vector<double> ass_kappas{0.5, 0.75, 0.95, 1.0};
    int ass_datasets = 300, ass_threads = 0;
    bool ass_full_scale = false;
    double ass_rate_q = 0.9, ass_size_q = 0.6;
    std::string ass_target = "week3";
    cmd_ass->add_option("--mode", ass_mode, "loo (observed data) or sim (known model)");
    cmd_ass->add_option("--model", ass_model, "fitted model JSON (sim mode)");
    auto* ass_feat_opt = cmd_ass->add_option("--features", ass_features, "features CSV (loo mode)");
    auto* ass_input_opt = cmd_ass->add_option("--input", ass_input, "weekly series CSV (loo mode)");
    auto* ass_target_opt = cmd_ass->add_option("--target", ass_target, "week3 or size (loo mode)");
    auto* ass_k_opt = cmd_ass->add_option("--kappa", ass_kappas, "level multipliers");
    auto* ass_n_opt = cmd_ass->add_option("--n-datasets", ass_datasets, "sim-mode datasets");
    cmd_ass->add_flag("--full-scale", ass_full_scale, "sim mode: use 1500 datasets");
    cmd_ass->add_option("--threads", ass_threads, "0 = library default, 1 = serial");
    auto* ass_seed_opt = cmd_ass->add_option("--seed", seed, "simulation seed");
    cmd_ass->add_option("--rate-threshold-quantile", ass_rate_q, "weekly-rate quantile");
    cmd_ass->add_option("--size-threshold-quantile", ass_size_q, "size quantile");
    cmd_ass->add_option("--report", ass_report, "report path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    const json cfg = load_config(config_path);

    if (*cmd_demo) {
        seed = resolve_seed(demo_seed_opt, seed == 1 ? 8501 : seed);
        std::ofstream out(demo_out);
        if (!out) throw evt::DomainError("cannot write " + demo_out);
        out << evt::demo_series_csv(seed);
        std::cerr << "wrote " << demo_out << '\n';
        return 0;
    }

    if (*cmd_seg) {
        config_default(seg_input_opt, cfg, "input_path", seg_input);
        config_default(seg_q_opt, cfg, "start_quantile", start_quantile);
        if (seg_input.empty()) throw evt::ConfigError("segment: --input (or config input_path) required");
        if (start_quantile <= 0.0 || start_quantile >= 1.0)
            throw evt::ConfigError("start_quantile must lie in (0,1)");
        const evt::IncidenceSeries series = evt::load_series(seg_input);
        const std::vector<double> rates = series.rates();
        const double start_threshold = evt::empirical_quantile(rates, start_quantile);
        std::vector<double> bound;
        evt::EndRule rule = evt::EndRule::kSerfling;
        try {
            bound = evt::serfling_baseline(series);
        } catch (const evt::DomainError&) {
            rule = evt::EndRule::kThresholdFallback;
        }
        const auto epidemics = evt::segment_epidemics(series, start_threshold, rule,
                                                      bound.empty() ? nullptr : &bound);
        std::vector<evt::EpidemicFeatures> feats;
        json rows = json::array();
        for (const auto& e : epidemics) {
            const auto f = evt::epidemic_features(e);
            feats.push_back(f);
            rows.push_back({{"season", f.season_label},
                            {"start_index", e.start_index},
                            {"duration", e.duration()},
                            {"y1", f.y1},
                            {"y2", f.y2},
                            {"y3", f.y3},
                            {"size", f.size},
                            {"has_week3", f.has_week3}});
        }
        write_features_csv(seg_features, feats);
        write_report(seg_report, "segment",
                     {{"input_path", seg_input},
                      {"start_quantile", start_quantile},
                      {"start_threshold", start_threshold},
                      {"end_rule", rule == evt::EndRule::kSerfling ? "serfling" : "threshold"}},
                     0, {{"n_epidemics", epidemics.size()},
                         {"features_csv", seg_features},
                         {"epidemics", rows}});
        return 0;
    }

    if (*cmd_uni) {
        config_default(uni_input_opt, cfg, "input_path", uni_input);
        config_default(uni_feat_opt, cfg, "features_path", uni_features);
        config_default(uni_rate_opt, cfg, "rate_threshold_quantile", rate_q);
        config_default(uni_size_opt, cfg, "size_threshold_quantile", size_q);
        if (uni_input.empty() || uni_features.empty())
            throw evt::ConfigError("fit-uni: --input and --features required");
        const evt::IncidenceSeries series = evt::load_series(uni_input);
        const auto rows = load_features(uni_features);
        const double u_rate = evt::empirical_quantile(series.rates(), rate_q);
        std::vector<double> sizes;
        for (const auto& r : rows) sizes.push_back(r.size);
        const double u_size = evt::empirical_quantile(sizes, size_q);

        json result;
        result["rate_threshold"] = u_rate;
        result["size_threshold"] = u_size;
        const char* names[4] = {"week1", "week2", "week3", "size"};
        for (int j = 0; j < 4; ++j) {
            std::vector<double> values;
            for (const auto& r : rows) {
                if (j < 3 && !r.has_week3) continue;
                values.push_back(j == 0 ? r.y1 : j == 1 ? r.y2 : j == 2 ? r.y3 : r.size);
            }
            const double u = j == 3 ? u_size : u_rate;
            std::vector<double> excesses;
            for (double v : values)
                if (v > u) excesses.push_back(v - u);
            json entry;
            entry["threshold"] = u;
            entry["n"] = values.size();
            entry["n_excess"] = excesses.size();
            if (excesses.size() >= 2) {
                evt::UnivariateGpFit fe = evt::fit_exponential(excesses);
                fe.threshold = u;
                fe.exceed_freq =
                    static_cast<double>(excesses.size()) / static_cast<double>(values.size());
                entry["exponential"] = fit_summary(fe);
                try {
                    const evt::UnivariateGpFit fg = evt::fit_gp_excesses(excesses);
                    entry["free_gamma"] = fit_summary(fg);
                    entry["lr_p_gamma_zero"] = evt::lr_test_gamma_zero(fg, fe);
                } catch (const evt::NumericError& e) {
                    entry["free_gamma_error"] = e.what();
                }
            } else {
                entry["error"] = "fewer than 2 positive excesses";
            }
            result[names[j]] = entry;
        }
        write_report(uni_report, "fit-uni",
                     {{"input_path", uni_input},
                      {"features_path", uni_features},
                      {"rate_threshold_quantile", rate_q},
                      {"size_threshold_quantile", size_q}},
                     0, result);
        return 0;
    }

    if (*cmd_rl) {
        evt::UnivariateGpFit fit;
        fit.threshold = rl_u;
        fit.sigma = rl_sigma;
        fit.exceed_freq = rl_pu;
        fit.gamma = 0.0;
        fit.gamma_fixed = true;
        json rows = json::array();
        for (double alpha : rl_alphas)
            for (int n : rl_horizons)
                rows.push_back({{"alpha", alpha},
                                {"n", n},
                                {"level", evt::return_level(fit, {alpha, n})}});
        write_report(rl_report, "return-levels",
                     {{"u", rl_u}, {"sigma", rl_sigma}, {"pu", rl_pu}}, 0,
                     {{"levels", rows}});
        return 0;
    }

    if (*cmd_mv) {
        config_default(mv_input_opt, cfg, "input_path", mv_input);
        config_default(mv_feat_opt, cfg, "features_path", mv_features);
        config_default(mv_target_opt, cfg, "target", mv_target);
        config_default(mv_family_opt, cfg, "family", mv_family);
        config_default(mv_rate_opt, cfg, "rate_threshold_quantile", mv_rate_q);
        config_default(mv_size_opt, cfg, "size_threshold_quantile", mv_size_q);
        if (mv_input.empty() || mv_features.empty())
            throw evt::ConfigError("fit-mvgp: --input and --features required");
        seed = resolve_seed(mv_seed_opt, seed);
        const evt::IncidenceSeries series = evt::load_series(mv_input);
        const auto rows = load_features(mv_features);
        const double u_rate = evt::empirical_quantile(series.rates(), mv_rate_q);
        const TargetData data = build_target(rows, mv_target, u_rate, mv_size_q);
        const evt::Vec3 scales = estimate_scales(data.raw, data.thresholds);
        const auto vectors = evt::standardize(data.raw, data.thresholds, scales);

        evt::FitOptions options;
        options.n_starts = mv_starts;
        options.seed = seed;
        const evt::GeneratorKind kind = evt::generator_kind_from_string(mv_family);
        evt::MvGpModel model = evt::fit_mvgp(vectors, kind, evt::Submodel::kM1, options);
        model.marginal_scales = scales;
        model.thresholds = data.thresholds;

        json selection = json::array();
        for (const auto& row : evt::model_selection(vectors, options))
            selection.push_back({{"family", evt::to_string(row.kind)},
                                 {"ok", row.ok},
                                 {"aic", row.aic},
                                 {"bic", row.bic},
                                 {"loglik", row.log_lik},
                                 {"error", row.error}});
        json ladder = json::array();
        for (const auto& row : evt::simplify_ladder(vectors, kind, options)) {
            json r{{"submodel", evt::to_string(row.submodel)},
                   {"n_params", row.n_params},
                   {"aic", row.aic},
                   {"bic", row.bic},
                   {"loglik", row.log_lik}};
            if (row.p_value_vs_m1) r["p_vs_m1"] = *row.p_value_vs_m1;
            ladder.push_back(r);
        }

        {
            std::ofstream out(mv_model_out);
            if (!out) throw evt::DomainError("cannot write model file: " + mv_model_out);
            out << evt::model_to_json(model).dump(2) << '\n';
        }
        write_report(mv_report, "fit-mvgp",
                     {{"input_path", mv_input},
                      {"features_path", mv_features},
                      {"target", mv_target},
                      {"family", mv_family},
                      {"rate_threshold_quantile", mv_rate_q},
                      {"size_threshold_quantile", mv_size_q},
                      {"starts", mv_starts}},
                     seed,
                     {{"model_file", mv_model_out},
                      {"model", evt::model_to_json(model)},
                      {"n_vectors", model.n_vectors},
                      {"boundary_warning", model.boundary_warning},
                      {"family_selection", selection},
                      {"submodel_ladder", ladder}});
        return 0;
    }

    if (*cmd_pred) {
        config_default(pred_feat_opt, cfg, "features_path", pred_features);
        config_default(pred_k_opt, cfg, "kappas", pred_kappas);
        const evt::MvGpModel model = load_model(pred_model);
        double btp = 0.0;
        double hist_max = 0.0;
        if (!pred_features.empty()) {
            const auto rows = load_features(pred_features);
            std::vector<evt::Vec3> history;
            const bool is_size = model.thresholds[2] != model.thresholds[0];
            for (const auto& r : rows) {
                if (!is_size && !r.has_week3) continue;
                history.push_back({r.y1, r.y2, is_size ? r.size : r.y3});
                hist_max = std::max(hist_max, history.back()[2]);
            }
            btp = evt::below_threshold_prob(history, model.thresholds);
        } else if (pred_levels.empty()) {
            throw evt::ConfigError("predict: --features or explicit --level values required");
        }
        json rows = json::array();
        for (double kappa : pred_kappas) {
            if (pred_features.empty()) break;
            const double level = kappa * hist_max;
            if (level <= model.thresholds[2]) continue;
            const double p =
                evt::predict_level(model, {pred_y1, pred_y2, level, btp});
            rows.push_back({{"kappa", kappa}, {"level", level}, {"probability", p}});
        }
        for (double level : pred_levels) {
            const double p = evt::predict_level(model, {pred_y1, pred_y2, level, btp});
            rows.push_back({{"kappa", nullptr}, {"level", level}, {"probability", p}});
        }
        write_report(pred_report, "predict",
                     {{"model", pred_model},
                      {"features_path", pred_features},
                      {"y1", pred_y1},
                      {"y2", pred_y2},
                      {"kappas", pred_kappas},
                      {"below_threshold_prob", btp},
                      {"historical_max", hist_max}},
                     0, {{"predictions", rows}});
        return 0;
    }

    if (*cmd_anom) {
        config_default(anom_n_opt, cfg, "n_datasets", anom_datasets);
        seed = resolve_seed(anom_seed_opt, seed);
        const evt::MvGpModel model = load_model(anom_model);
        evt::CalibrationConfig config;
        config.sim.seed = seed;
        config.sim.n_datasets = anom_datasets;
        config.n_threads = anom_threads;
        const evt::AnomalyCalibration cal = evt::calibrate(model, config);
        json cutoffs = json::array();
        for (const auto& [level, cutoff] : cal.cutoffs)
            cutoffs.push_back({{"level", level}, {"cutoff", cutoff}});
        if (anom_point_values.size() % 3 != 0)
            throw evt::ConfigError("--point values must come in triples");
        json verdicts = json::array();
        for (std::size_t i = 0; i + 2 < anom_point_values.size(); i += 3) {
            const evt::ExcessVector x{anom_point_values[i], anom_point_values[i + 1],
                                      anom_point_values[i + 2]};
            const auto v = evt::test_anomaly(model, cal, x);
            verdicts.push_back({{"point", {x[0], x[1], x[2]}},
                                {"nll", v.nll},
                                {"flagged_levels", v.flagged_levels}});
        }
        write_report(anom_report, "anomaly",
                     {{"model", anom_model}, {"n_datasets", anom_datasets}}, seed,
                     {{"cutoffs", cutoffs},
                      {"n_failed_fits", cal.n_failed_fits},
                      {"verdicts", verdicts}});
        return 0;
    }

    if (*cmd_sim) {
        config_default(sim_n_opt, cfg, "n_vectors", sim_n);
        seed = resolve_seed(sim_seed_opt, seed);
        const evt::MvGpModel model = load_model(sim_model);
        if (sim_n < 0) throw evt::ConfigError("simulate: --n must be nonnegative");
        const auto vectors = evt::sample_gp(model, sim_n, seed);
        std::ofstream out(sim_out);
        if (!out) throw evt::DomainError("cannot write " + sim_out);
        out << (sim_original_units ? "y1,y2,y3\n" : "x1,x2,x3\n");
        out.precision(17);
        if (sim_original_units) {
            for (const auto& y : evt::unstandardize(vectors, model))
                out << y[0] << ',' << y[1] << ',' << y[2] << '\n';
        } else {
            for (const auto& x : vectors) out << x[0] << ',' << x[1] << ',' << x[2] << '\n';
        }
        write_report(sim_report, "simulate",
                     {{"model", sim_model},
                      {"n_vectors", sim_n},
                      {"original_units", sim_original_units}},
                     seed, {{"output_csv", sim_out}, {"n_written", vectors.size()}});
        return 0;
    }

    if (*cmd_ass) {
        config_default(ass_feat_opt, cfg, "features_path", ass_features);
        config_default(ass_input_opt, cfg, "input_path", ass_input);
        config_default(ass_target_opt, cfg, "target", ass_target);
        config_default(ass_k_opt, cfg, "kappas", ass_kappas);
        config_default(ass_n_opt, cfg, "n_datasets", ass_datasets);
        seed = resolve_seed(ass_seed_opt, seed);
        json result;
        json config_json{{"mode", ass_mode}, {"kappas", ass_kappas}};
        if (ass_mode == "loo") {
            if (ass_features.empty() || ass_input.empty())
                throw evt::ConfigError("assess --mode loo: --input and --features required");
            const evt::IncidenceSeries series = evt::load_series(ass_input);
            const auto rows = load_features(ass_features);
            const double u_rate = evt::empirical_quantile(series.rates(), ass_rate_q);
            const TargetData data = build_target(rows, ass_target, u_rate, ass_size_q);
            double target_max = 0.0;
            for (const auto& y : data.raw) target_max = std::max(target_max, y[2]);
            std::vector<double> levels;
            for (double k : ass_kappas) levels.push_back(k * target_max);
            evt::LooConfig loo;
            loo.thresholds = data.thresholds;
            loo.n_threads = ass_threads;
            const evt::LooAssessment a = evt::loo_assess(data.raw, levels, loo);
            json scores = json::array();
            for (const auto& s : a.scores) {
                json row{{"level", s.level}};
                if (s.gp_brier) row["gp_brier"] = *s.gp_brier;
                if (s.logistic_brier) row["logistic_brier"] = *s.logistic_brier;
                if (!s.skipped_reason.empty()) row["skipped"] = s.skipped_reason;
                scores.push_back(row);
            }
            result = {{"scores", scores},
                      {"n_records", a.records.size()},
                      {"fold_errors", a.fold_errors},
                      {"target_max", target_max}};
            config_json["input_path"] = ass_input;
            config_json["features_path"] = ass_features;
            config_json["target"] = ass_target;
        } else if (ass_mode == "sim") {
            if (ass_model.empty())
                throw evt::ConfigError("assess --mode sim: --model required");
            const evt::MvGpModel model = load_model(ass_model);
            evt::SimAssessConfig sim;
            sim.sim.seed = seed;
            sim.sim.n_datasets = ass_full_scale ? 1500 : ass_datasets;
            sim.n_threads = ass_threads;
            // Levels as kappa times the return-style reference: the target
            // threshold plus scale, unless the model stores real thresholds,
            // in which case kappa multiplies u3 + 2 * scale3.
            const double reference = model.thresholds[2] + 2.0 * model.marginal_scales[2];
            std::vector<double> levels;
            for (double k : ass_kappas) levels.push_back(k * reference);
            const evt::SimAssessment a = evt::sim_assess(model, levels, sim);
            json scores = json::array();
            for (const auto& s : a.scores) {
                json row{{"level", s.level}};
                if (s.gp_brier) row["gp_brier"] = *s.gp_brier;
                if (s.logistic_brier) row["logistic_brier"] = *s.logistic_brier;
                if (s.true_brier) row["true_brier"] = *s.true_brier;
                if (s.gp_ap) row["gp_ap"] = *s.gp_ap;
                if (s.logistic_ap) row["logistic_ap"] = *s.logistic_ap;
                if (s.true_ap) row["true_ap"] = *s.true_ap;
                scores.push_back(row);
            }
            result = {{"scores", scores},
                      {"n_records", a.records.size()},
                      {"n_failed_fits", a.n_failed_fits}};
            config_json["model"] = ass_model;
            config_json["n_datasets"] = sim.sim.n_datasets;
        } else {
            throw evt::ConfigError("assess: --mode must be loo or sim");
        }
        write_report(ass_report, "assess", config_json, seed, result);
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const evt::NumericError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const evt::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
