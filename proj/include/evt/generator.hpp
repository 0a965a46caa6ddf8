#pragma once

#include <array>
#include <string>

namespace evt {

using Vec3 = std::array<double, 3>;

enum class GeneratorKind { kGumbel, kReverseExponential, kReverseGumbel };

std::string to_string(GeneratorKind kind);
GeneratorKind generator_kind_from_string(const std::string& name);

// Three independent components, each with a location/shape pair
// (alpha_i, beta_i). beta[0] is pinned to 0 in fitted models for
// identifiability; the density/cdf functions accept any beta.
struct GeneratorFamily {
    GeneratorKind kind = GeneratorKind::kGumbel;
    Vec3 alpha{2.0, 2.0, 2.0};
    Vec3 beta{0.0, 0.0, 0.0};

    // Finiteness of E[e^{max U}]: Gumbel needs alpha_i > 1.
    void validate() const;
};

// Marginal pieces of the generator law; component index i in {0,1,2}.
double marginal_log_pdf(const GeneratorFamily& f, int i, double u);
double marginal_cdf(const GeneratorFamily& f, int i, double u);
double marginal_survival(const GeneratorFamily& f, int i, double u);  // 1 - cdf, stable near 1
double marginal_quantile(const GeneratorFamily& f, int i, double p);

// log f_U(u) = sum of marginal log densities; -infinity outside support.
double generator_log_density(const GeneratorFamily& f, const Vec3& u);

}  // namespace evt
