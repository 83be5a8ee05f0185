#include "gvb/manifest.hpp"

#include <fstream>

#include "gvb/errors.hpp"

namespace gvb {

void write_manifest(const std::filesystem::path& path, const std::vector<TaskInstance>& rows) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  for (const auto& r : rows) f << to_json(r).dump() << '\n';
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read " + path.string());
  std::vector<std::string> lines;
  for (std::string line; std::getline(f, line);)
    if (line.find_first_not_of(" \t\r") != std::string::npos) lines.push_back(line);
  std::vector<nlohmann::json> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto j = nlohmann::json::parse(lines[i], nullptr, false);
    if (j.is_discarded()) {
      if (i + 1 == lines.size()) break;
      throw ConfigError(path.string() + ": malformed line " + std::to_string(i + 1));
    }
    out.push_back(std::move(j));
  }
  return out;
}

std::vector<TaskInstance> read_manifest(const std::filesystem::path& path) {
  std::vector<TaskInstance> rows;
  for (const auto& j : read_jsonl(path)) {
    try {
      rows.push_back(instance_from_json(j));
    } catch (const std::exception& e) {
      throw ConfigError(path.string() + ": " + e.what());
    }
  }
  return rows;
}

}  // namespace gvb
