#pragma once

#include <cstdint>
#include <vector>

#include "evt/mvgp.hpp"
#include "evt/rng.hpp"

namespace evt {

struct SimulationConfig {
    std::uint64_t seed = 1;
    int n_vectors = 33;
    int n_datasets = 1500;
};

// Draws standard-form GP vectors: X = E + T - max(T) with E unit
// exponential and T the generator exponentially tilted by e^{max u}
// (the tilt is what makes the output law match the U-representation
// density; validated against the density and margin oracles). The tilted
// law is sampled exactly as an argmax mixture with tabulated inverse cdfs.
class GpSampler {
public:
    explicit GpSampler(GeneratorFamily family);

    ExcessVector sample(CounterRng& rng) const;
    std::vector<ExcessVector> sample_n(CounterRng& rng, int n) const;

    // Sum of the mixture weights; equals E[e^{max U}] analytically, which
    // the tests cross-check against the quadrature normalizer.
    double total_weight() const { return total_weight_; }

private:
    GeneratorFamily family_;
    double total_weight_;
    std::array<double, 3> weights_;
    struct InverseCdf {
        std::vector<double> grid;
        std::vector<double> cdf;  // normalized to [0,1]
        double invert(double p) const;
    };
    std::array<InverseCdf, 3> argmax_tables_;
};

std::vector<ExcessVector> sample_gp(const MvGpModel& model, int n, std::uint64_t seed);

// Independent per-dataset substreams; dataset d is reproducible from
// (config.seed, d) alone.
std::vector<std::vector<ExcessVector>> sample_datasets(const MvGpModel& model,
                                                       const SimulationConfig& config);

// y_j = u_j + scale_j * x_j.
std::vector<Vec3> unstandardize(const std::vector<ExcessVector>& vectors,
                                const MvGpModel& model);

}  // namespace evt
