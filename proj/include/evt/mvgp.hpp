#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "evt/generator.hpp"

namespace evt {

// A standardized excess vector; valid on the support {x !<= 0}.
using ExcessVector = Vec3;

inline bool is_positive_excess(const ExcessVector& x) {
    return x[0] > 0.0 || x[1] > 0.0 || x[2] > 0.0;
}

enum class Submodel { kM1, kM2, kM3, kM4 };

int submodel_param_count(Submodel m);
std::string to_string(Submodel m);

struct MvGpModel {
    GeneratorFamily family;
    Vec3 marginal_scales{1.0, 1.0, 1.0};
    Vec3 thresholds{0.0, 0.0, 0.0};
    double log_lik = 0.0;
    int n_vectors = 0;
    Submodel submodel = Submodel::kM1;
    bool boundary_warning = false;

    double aic() const;
    double bic() const;
};

// E[e^{max U}], the normalizing constant of the GP density.
double normalizer(const GeneratorFamily& family);

// Caches the log normalizer so repeated density evaluations share it.
class GpDensity {
public:
    explicit GpDensity(GeneratorFamily family);

    // log h_U(x) with standard margins (closed form for the reverse
    // exponential family, quadrature otherwise).
    double log_density(const ExcessVector& x) const;

    // Always-quadrature route, kept as the cross-check for the closed form.
    double log_density_quadrature(const ExcessVector& x) const;

    const GeneratorFamily& family() const { return family_; }
    double log_normalizer() const { return log_norm_; }

private:
    GeneratorFamily family_;
    double log_norm_;
};

double gp_log_density(const GeneratorFamily& family, const ExcessVector& x);

// General-margin density; requires 1 + gamma_j x_j / sigma_j > 0.
double gp_log_density_general(const GeneratorFamily& family, const Vec3& x,
                              const Vec3& sigma, const Vec3& gamma);

struct FitOptions {
    int n_starts = 10;
    std::uint64_t seed = 0x657674666974ULL;  // default multi-start stream
    int max_iter = 4000;
    // Optional warm start: simplex center taken from these parameters
    // (used by calibration-style refits where the generating model is known).
    std::optional<GeneratorFamily> init;
};

MvGpModel fit_mvgp(const std::vector<ExcessVector>& vectors, GeneratorKind kind,
                   Submodel submodel = Submodel::kM1, const FitOptions& options = {});

struct SelectionRow {
    GeneratorKind kind;
    double aic = 0.0;
    double bic = 0.0;
    double log_lik = 0.0;
    bool ok = false;
    std::string error;
};

// All three families fitted (M1), ranked by AIC; per-family failures are
// reported in-row, not propagated.
std::vector<SelectionRow> model_selection(const std::vector<ExcessVector>& vectors,
                                          const FitOptions& options = {});

struct LadderRow {
    Submodel submodel;
    int n_params = 0;
    double aic = 0.0;
    double bic = 0.0;
    double log_lik = 0.0;
    std::optional<double> p_value_vs_m1;  // absent for M1 itself
};

std::vector<LadderRow> simplify_ladder(const std::vector<ExcessVector>& vectors,
                                       GeneratorKind kind = GeneratorKind::kGumbel,
                                       const FitOptions& options = {});

// x_j = (value_j - u_j) / scale_j; only vectors with some x_j > 0 kept.
std::vector<ExcessVector> standardize(const std::vector<Vec3>& raw, const Vec3& thresholds,
                                      const Vec3& scales);

}  // namespace evt
