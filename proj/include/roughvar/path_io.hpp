#pragma once

#include <filesystem>
#include <iosfwd>

#include <json.hpp>

#include "roughvar/sampled_path.hpp"
#include "roughvar/tensor.hpp"

namespace roughvar {

/// CSV with header `t,x1,...,xd`, one sample per row.
SampledPath read_path_csv(std::istream& in);
SampledPath read_path_csv(const std::filesystem::path& file);
void write_path_csv(std::ostream& out, const SampledPath& path);
void write_path_csv(const std::filesystem::path& file, const SampledPath& path);

/// {"dimension", "level", "times", "points": [[level1...], [level2...], ...]}
/// with every level flattened row-major.
nlohmann::json group_path_to_json(const GroupPath& path);
GroupPath group_path_from_json(const nlohmann::json& j);

}  // namespace roughvar
