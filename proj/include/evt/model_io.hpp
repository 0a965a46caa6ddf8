#pragma once

#include <string>

#include <json.hpp>

#include "evt/mvgp.hpp"

namespace evt {

inline nlohmann::json model_to_json(const MvGpModel& m) {
    return {
        {"family", to_string(m.family.kind)},
        {"alpha", m.family.alpha},
        {"beta", m.family.beta},
        {"scales", m.marginal_scales},
        {"thresholds", m.thresholds},
        {"loglik", m.log_lik},
        {"n", m.n_vectors},
        {"submodel", to_string(m.submodel)},
    };
}

inline MvGpModel model_from_json(const nlohmann::json& j) {
    MvGpModel m;
    m.family.kind = generator_kind_from_string(j.at("family").get<std::string>());
    m.family.alpha = j.at("alpha").get<Vec3>();
    m.family.beta = j.at("beta").get<Vec3>();
    m.marginal_scales = j.at("scales").get<Vec3>();
    m.thresholds = j.at("thresholds").get<Vec3>();
    m.log_lik = j.value("loglik", 0.0);
    m.n_vectors = j.value("n", 0);
    const std::string sub = j.value("submodel", "M1");
    m.submodel = sub == "M2"   ? Submodel::kM2
                 : sub == "M3" ? Submodel::kM3
                 : sub == "M4" ? Submodel::kM4
                               : Submodel::kM1;
    m.family.validate();
    return m;
}

}  // namespace evt
