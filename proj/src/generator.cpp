#include "evt/generator.hpp"

#include <cmath>
#include <limits>

#include "evt/errors.hpp"

namespace evt {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

std::string to_string(GeneratorKind kind) {
    switch (kind) {
        case GeneratorKind::kGumbel: return "gumbel";
        case GeneratorKind::kReverseExponential: return "reverse_exponential";
        case GeneratorKind::kReverseGumbel: return "reverse_gumbel";
    }
    return "?";
}

GeneratorKind generator_kind_from_string(const std::string& name) {
    if (name == "gumbel") return GeneratorKind::kGumbel;
    if (name == "reverse_exponential") return GeneratorKind::kReverseExponential;
    if (name == "reverse_gumbel") return GeneratorKind::kReverseGumbel;
    throw ConfigError("unknown generator family: " + name);
}

void GeneratorFamily::validate() const {
    for (int i = 0; i < 3; ++i) {
        if (!(alpha[i] > 0.0)) throw DomainError("generator: alpha must be positive");
        if (kind == GeneratorKind::kGumbel && !(alpha[i] > 1.0))
            throw DomainError("gumbel generator: alpha must exceed 1 for a finite normalizer");
    }
}

double marginal_log_pdf(const GeneratorFamily& f, int i, double u) {
    const double a = f.alpha[i], b = f.beta[i];
    switch (f.kind) {
        case GeneratorKind::kGumbel: {
            const double z = -a * (u - b);
            return std::log(a) + z - std::exp(z);
        }
        case GeneratorKind::kReverseExponential:
            if (u >= -b) return kNegInf;
            return (u + b) / a - std::log(a);
        case GeneratorKind::kReverseGumbel: {
            const double z = a * (u - b);
            return std::log(a) + z - std::exp(z);
        }
    }
    return kNegInf;
}

double marginal_cdf(const GeneratorFamily& f, int i, double u) {
    const double a = f.alpha[i], b = f.beta[i];
    switch (f.kind) {
        case GeneratorKind::kGumbel:
            return std::exp(-std::exp(-a * (u - b)));
        case GeneratorKind::kReverseExponential:
            return u >= -b ? 1.0 : std::exp((u + b) / a);
        case GeneratorKind::kReverseGumbel:
            return -std::expm1(-std::exp(a * (u - b)));
    }
    return 0.0;
}

double marginal_survival(const GeneratorFamily& f, int i, double u) {
    const double a = f.alpha[i], b = f.beta[i];
    switch (f.kind) {
        case GeneratorKind::kGumbel:
            return -std::expm1(-std::exp(-a * (u - b)));
        case GeneratorKind::kReverseExponential:
            return u >= -b ? 0.0 : -std::expm1((u + b) / a);
        case GeneratorKind::kReverseGumbel:
            return std::exp(-std::exp(a * (u - b)));
    }
    return 0.0;
}

double marginal_quantile(const GeneratorFamily& f, int i, double p) {
    if (p <= 0.0 || p >= 1.0) throw DomainError("marginal_quantile: p in (0,1) required");
    const double a = f.alpha[i], b = f.beta[i];
    switch (f.kind) {
        case GeneratorKind::kGumbel:
            return b - std::log(-std::log(p)) / a;
        case GeneratorKind::kReverseExponential:
            return -b + a * std::log(p);
        case GeneratorKind::kReverseGumbel:
            return b + std::log(-std::log1p(-p)) / a;
    }
    return 0.0;
}

double generator_log_density(const GeneratorFamily& f, const Vec3& u) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double l = marginal_log_pdf(f, i, u[i]);
        if (l == kNegInf) return kNegInf;
        s += l;
    }
    return s;
}

}  // namespace evt
