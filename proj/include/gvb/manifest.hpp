#pragma once

#include <filesystem>
#include <vector>

#include "gvb/taskgen.hpp"

namespace gvb {

/// One JSON object per line, in the given order.
void write_manifest(const std::filesystem::path& path, const std::vector<TaskInstance>& rows);
std::vector<TaskInstance> read_manifest(const std::filesystem::path& path);

/// Reads every non-empty line of a JSONL file. A malformed final line (an
/// interrupted append) is skipped; malformed earlier lines throw ConfigError.
std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);

}  // namespace gvb
