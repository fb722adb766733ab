#include "oscspec/serialize.hpp"

#include <fstream>
#include <sstream>

#include "oscspec/errors.hpp"

namespace oscspec {

namespace {

void expect_kind(const json& j, const char* kind) {
    if (!j.is_object()) throw input_error(std::string("expected a JSON object for ") + kind);
    if (j.contains("kind") && j["kind"] != kind)
        throw input_error(std::string("expected kind \"") + kind + "\", got " + j["kind"].dump());
    if (j.contains("schema_version") && j["schema_version"] != schema_version)
        throw input_error("unsupported schema_version " + j["schema_version"].dump());
}

template <class T>
T field(const json& j, const char* name) {
    if (!j.contains(name)) throw input_error(std::string("missing field \"") + name + "\"");
    try {
        return j[name].get<T>();
    } catch (const json::exception& e) {
        throw input_error(std::string("field \"") + name + "\": " + e.what());
    }
}

json header(const char* kind) { return json{{"schema_version", schema_version}, {"kind", kind}}; }

json optional_array(const std::optional<std::vector<double>>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

json to_json(const Potential& q) {
    json j = header("potential");
    j["xmax"] = q.grid().xmax();
    j["h"] = q.grid().h();
    j["values"] = std::vector<double>(q.values().begin(), q.values().end());
    j["hermite"] = optional_array(q.hermite());
    return j;
}

Potential potential_from_json(const json& j) {
    expect_kind(j, "potential");
    const auto h = field<double>(j, "h");
    const auto xmax = field<double>(j, "xmax");
    const Grid grid(xmax, h);
    if (j.contains("hermite") && !j["hermite"].is_null())
        return Potential::from_hermite(field<std::vector<double>>(j, "hermite"), grid);
    auto values = field<std::vector<double>>(j, "values");
    if (values.size() != grid.size())
        throw input_error("potential has " + std::to_string(values.size()) + " values, grid (xmax, h) needs " +
                          std::to_string(grid.size()));
    return Potential::from_samples(std::move(values), grid);
}

json to_json(const SpectralDataSet& d) {
    json j = header("spectral_data");
    j["N"] = d.N;
    j["sigma"] = d.sigma;
    j["nu"] = d.nu;
    j["mu"] = d.mu;
    j["q0"] = d.q0;
    j["r"] = d.r;
    j["neumann"] = optional_array(d.neumann);
    j["quality"] = d.quality;
    return j;
}

SpectralDataSet dataset_from_json(const json& j) {
    expect_kind(j, "spectral_data");
    auto sigma = field<std::vector<double>>(j, "sigma");
    const auto N = field<int>(j, "N");
    if (N < 0 || static_cast<std::size_t>(N) != sigma.size())
        throw input_error("N = " + std::to_string(N) + " does not match " + std::to_string(sigma.size()) +
                          " sigma values");
    const auto q0 = field<double>(j, "q0");
    std::vector<double> nu;
    if (j.contains("nu") && !j["nu"].is_null()) {
        nu = field<std::vector<double>>(j, "nu");
    } else {
        // nu from r when only r is given
        const auto r = field<std::vector<double>>(j, "r");
        if (r.size() != sigma.size()) throw input_error("r length differs from sigma");
        for (int n = 0; n < N; ++n) nu.push_back(r[n] - r_from_nu(0.0, n, q0));
    }
    auto d = make_dataset(std::move(sigma), std::move(nu), q0);
    if (j.contains("neumann") && !j["neumann"].is_null()) d.neumann = field<std::vector<double>>(j, "neumann");
    if (j.contains("quality")) {
        d.quality = field<std::vector<double>>(j, "quality");
        if (d.quality.size() != d.sigma.size()) throw input_error("quality length differs from sigma");
    }
    return d;
}

json to_json(const ResidualReport& r) {
    json j = header("residual_report");
    j["first"] = r.first;
    j["last"] = r.last;
    j["fitted_exponent"] = r.fitted_exponent;
    j["residuals"] = r.residuals;
    j["weighted_norms"] = r.weighted_norms;
    return j;
}

json to_json(const IdentityCheck& c) {
    return json{{"name", c.name}, {"residual", c.residual}, {"bound", c.bound}, {"pass", c.pass()}};
}

json to_json(const IterationRecord& r) {
    return json{{"iter", r.iter}, {"residual", r.residual}, {"step_norm", r.step_norm}};
}

json to_json(const Reconstruction& r) {
    json j = header("reconstruction");
    j["converged"] = r.converged;
    j["residual"] = r.residual;
    j["condition"] = r.condition;
    j["coeffs"] = r.coeffs;
    j["log"] = json::array();
    for (const auto& rec : r.log) j["log"].push_back(to_json(rec));
    j["potential"] = to_json(r.q);
    return j;
}

std::string iteration_log_lines(const std::vector<IterationRecord>& log) {
    std::string out;
    for (const auto& r : log) out += to_json(r).dump() + "\n";
    return out;
}

json parse_json(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw input_error(origin + ": malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_json(ss.str(), path.string());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot write " + path.string());
    out << text;
    if (!out) throw input_error("write failed for " + path.string());
}

}  // namespace oscspec
