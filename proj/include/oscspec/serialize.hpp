#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "oscspec/asymptotics.hpp"
#include "oscspec/inverse.hpp"
#include "oscspec/linmaps.hpp"
#include "oscspec/potential.hpp"
#include "oscspec/spectral.hpp"

namespace oscspec {

using json = nlohmann::ordered_json;

inline constexpr int schema_version = 1;

json to_json(const Potential& q);
Potential potential_from_json(const json& j);

json to_json(const SpectralDataSet& d);
SpectralDataSet dataset_from_json(const json& j);

json to_json(const ResidualReport& r);
json to_json(const IdentityCheck& c);
json to_json(const IterationRecord& r);
json to_json(const Reconstruction& r);

// One {iter, residual, step_norm} object per line.
std::string iteration_log_lines(const std::vector<IterationRecord>& log);

// Parse errors become input_error with the byte position.
json read_json_file(const std::filesystem::path& path);
json parse_json(const std::string& text, const std::string& origin = "<string>");
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace oscspec
