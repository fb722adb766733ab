#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "json.hpp"

#include "oscspec/grid.hpp"

namespace oscspec {

struct RunConfig {
    std::optional<double> xmax;  // unset: derived from N
    double h = default_step;
    int N = 25;
    int K = 12;       // coefficient count for linmaps and identity checks
    int M = 1 << 15;  // Laurent terms kept in slowly converging kernel sums
    std::map<std::string, double> tolerances;
    std::uint64_t seed = 20261016;

    double tol(const std::string& name) const;
    double effective_xmax() const;
    Grid grid() const { return Grid(effective_xmax(), h); }
    void validate() const;
    double sigma_top() const;
};

const std::map<std::string, double>& default_tolerances();

// Fields present in j override cfg.
void merge_config(RunConfig& cfg, const nlohmann::ordered_json& j);
nlohmann::ordered_json to_json(const RunConfig& cfg);

}  // namespace oscspec
