#include "oscspec/config.hpp"

#include <cmath>

#include "oscspec/errors.hpp"

namespace oscspec {

const std::map<std::string, double>& default_tolerances() {
    static const std::map<std::string, double> t{
        {"spectrum", 1e-6},     {"nu_routes", 1e-5},   {"trace", 0.05},     {"identity", 1e-6},
        {"gradient_sigma", 1e-5}, {"gradient_nu", 1e-4}, {"orthogonality", 1e-5}, {"slope", -0.6},
        {"reconstruct", 1e-9},
    };
    return t;
}

double RunConfig::tol(const std::string& name) const {
    if (auto it = tolerances.find(name); it != tolerances.end()) return it->second;
    if (auto it = default_tolerances().find(name); it != default_tolerances().end()) return it->second;
    throw input_error("unknown tolerance \"" + name + "\"");
}

double RunConfig::effective_xmax() const { return xmax ? *xmax : default_xmax(N); }

void RunConfig::validate() const {
    if (xmax && !(*xmax > 0.0)) throw input_error("xmax must be positive");
    if (!(h > 0.0)) throw input_error("h must be positive");
    if (N <= 0 || K <= 0 || M <= 0) throw input_error("N, K and M must be positive");
    for (const auto& [name, value] : tolerances) {
        if (!default_tolerances().contains(name)) throw input_error("unknown tolerance \"" + name + "\"");
        if (!std::isfinite(value)) throw input_error("tolerance " + name + " is not finite");
    }
    const double top = sigma_top();
    if (top > std::pow(effective_xmax() - 3.0, 2))
        throw input_error("xmax = " + std::to_string(effective_xmax()) + " cannot resolve N = " + std::to_string(N));
}

double RunConfig::sigma_top() const { return 4.0 * N + 3.0; }

void merge_config(RunConfig& cfg, const nlohmann::ordered_json& j) {
    if (!j.is_object()) throw input_error("config must be a JSON object");
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "xmax") cfg.xmax = value.is_null() ? std::nullopt : std::optional<double>(value.get<double>());
            else if (key == "h") cfg.h = value.get<double>();
            else if (key == "N") cfg.N = value.get<int>();
            else if (key == "K") cfg.K = value.get<int>();
            else if (key == "M") cfg.M = value.get<int>();
            else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
            else if (key == "tolerances") {
                for (const auto& [name, v] : value.items()) cfg.tolerances[name] = v.get<double>();
            } else if (key != "schema_version" && key != "kind") {
                throw input_error("unknown config key \"" + key + "\"");
            }
        }
    } catch (const nlohmann::ordered_json::exception& e) {
        throw input_error(std::string("config: ") + e.what());
    }
}

nlohmann::ordered_json to_json(const RunConfig& cfg) {
    nlohmann::ordered_json j;
    j["xmax"] = cfg.effective_xmax();
    j["h"] = cfg.h;
    j["N"] = cfg.N;
    j["K"] = cfg.K;
    j["M"] = cfg.M;
    j["seed"] = cfg.seed;
    auto tol = default_tolerances();
    for (const auto& [k, v] : cfg.tolerances) tol[k] = v;
    j["tolerances"] = tol;
    return j;
}

}  // namespace oscspec
