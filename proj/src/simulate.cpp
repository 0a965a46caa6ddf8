#include "evt/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "evt/errors.hpp"
#include "evt/quadrature.hpp"

namespace evt {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kTableSize = 4096;

// log of the argmax-k mixture component density (unnormalized):
// e^t f_k(t) prod_{i != k} F_i(t).
double log_argmax_component(const GeneratorFamily& f, int k, double t) {
    double acc = t + marginal_log_pdf(f, k, t);
    if (acc == kNegInf) return kNegInf;
    for (int i = 0; i < 3; ++i) {
        if (i == k) continue;
        const double c = marginal_cdf(f, i, t);
        if (c <= 0.0) return kNegInf;
        acc += std::log(c);
    }
    return acc;
}

struct Bracket {
    double lo, hi, log_peak;
};

template <typename LogF>
Bracket find_bracket(LogF&& logf) {
    constexpr int kGrid = 240;
    const double lo_hint = -40.0, hi_hint = 40.0;
    const double step0 = (hi_hint - lo_hint) / kGrid;
    double s_best = 0.0, l_best = kNegInf;
    for (int i = 0; i <= kGrid; ++i) {
        const double s = lo_hint + step0 * i;
        const double l = logf(s);
        if (l > l_best) { l_best = l; s_best = s; }
    }
    if (l_best == kNegInf) throw NumericError("sampler: component density vanishes everywhere");
    double lo = s_best, hi = s_best, step = step0;
    while (logf(lo) > l_best - 40.0 && lo > s_best - 2000.0) { lo -= step; step *= 1.3; }
    step = step0;
    while (logf(hi) > l_best - 40.0 && hi < s_best + 2000.0) { hi += step; step *= 1.3; }
    return {lo, hi, l_best};
}

}  // namespace

double GpSampler::InverseCdf::invert(double p) const {
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), p);
    if (it == cdf.begin()) return grid.front();
    if (it == cdf.end()) return grid.back();
    const auto idx = static_cast<std::size_t>(it - cdf.begin());
    const double c0 = cdf[idx - 1], c1 = cdf[idx];
    const double w = c1 > c0 ? (p - c0) / (c1 - c0) : 0.5;
    return grid[idx - 1] + w * (grid[idx] - grid[idx - 1]);
}

GpSampler::GpSampler(GeneratorFamily family) : family_(std::move(family)) {
    family_.validate();
    total_weight_ = 0.0;
    for (int k = 0; k < 3; ++k) {
        auto logf = [&](double t) { return log_argmax_component(family_, k, t); };
        weights_[k] = std::exp(log_integrate_line(logf));
        total_weight_ += weights_[k];

        const Bracket br = find_bracket(logf);
        auto& table = argmax_tables_[k];
        table.grid.resize(kTableSize);
        table.cdf.resize(kTableSize);
        const double h = (br.hi - br.lo) / (kTableSize - 1);
        double acc = 0.0, prev = 0.0;
        for (int i = 0; i < kTableSize; ++i) {
            const double t = br.lo + h * i;
            const double l = logf(t);
            const double v = l == kNegInf ? 0.0 : std::exp(l - br.log_peak);
            if (i > 0) acc += 0.5 * (prev + v) * h;
            prev = v;
            table.grid[i] = t;
            table.cdf[i] = acc;
        }
        if (acc <= 0.0) throw NumericError("sampler: empty inverse-cdf table");
        for (auto& c : table.cdf) c /= acc;
    }
}

ExcessVector GpSampler::sample(CounterRng& rng) const {
    // Argmax index from the mixture weights.
    const double pick = rng.next_double() * total_weight_;
    int k = 0;
    double cum = weights_[0];
    while (k < 2 && pick > cum) cum += weights_[++k];

    Vec3 u;
    u[k] = argmax_tables_[k].invert(rng.next_double());
    for (int i = 0; i < 3; ++i) {
        if (i == k) continue;
        const double cap = std::max(marginal_cdf(family_, i, u[k]), 1e-300);
        const double p = std::clamp(rng.next_double() * cap, 1e-300, 1.0 - 1e-16);
        u[i] = marginal_quantile(family_, i, p);
        // Guard against interpolation putting u_i a hair above the argmax.
        u[i] = std::min(u[i], u[k]);
    }

    const double e = rng.next_exponential();
    const double m = *std::max_element(u.begin(), u.end());
    return {e + u[0] - m, e + u[1] - m, e + u[2] - m};
}

std::vector<ExcessVector> GpSampler::sample_n(CounterRng& rng, int n) const {
    std::vector<ExcessVector> out;
    out.reserve(static_cast<std::size_t>(std::max(0, n)));
    for (int i = 0; i < n; ++i) out.push_back(sample(rng));
    return out;
}

std::vector<ExcessVector> sample_gp(const MvGpModel& model, int n, std::uint64_t seed) {
    const GpSampler sampler(model.family);
    CounterRng rng(seed, 0);
    return sampler.sample_n(rng, n);
}

std::vector<std::vector<ExcessVector>> sample_datasets(const MvGpModel& model,
                                                       const SimulationConfig& config) {
    if (config.n_vectors < 1 || config.n_datasets < 1)
        throw DomainError("sample_datasets: n_vectors and n_datasets must be >= 1");
    const GpSampler sampler(model.family);
    std::vector<std::vector<ExcessVector>> out(config.n_datasets);
    for (int d = 0; d < config.n_datasets; ++d) {
        CounterRng rng(config.seed, static_cast<std::uint64_t>(d));
        out[d] = sampler.sample_n(rng, config.n_vectors);
    }
    return out;
}

std::vector<Vec3> unstandardize(const std::vector<ExcessVector>& vectors,
                                const MvGpModel& model) {
    std::vector<Vec3> out;
    out.reserve(vectors.size());
    for (const auto& x : vectors) {
        Vec3 y;
        for (int j = 0; j < 3; ++j)
            y[j] = model.thresholds[j] + model.marginal_scales[j] * x[j];
        out.push_back(y);
    }
    return out;
}

}  // namespace evt
