#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "gvb/eval_client.hpp"
#include "gvb/taskgen.hpp"

namespace gvb::cli {

/// Everything a pipeline run reads. JSON keys mirror the field names; every
/// key is optional and defaults to the values below.
struct RunConfig {
  DatasetConfig dataset;
  /// model_id is taken from `models` / --model.
  ModelEndpoint endpoint;
  std::vector<std::string> models;
  std::vector<std::string> strategies{"zero_shot", "cot"};
  /// Request fan-out for evaluate, worker threads for generate / verify.
  int concurrency = 4;
  std::string out = "out";
};

nlohmann::json to_json(const RunConfig& c);
/// Unknown keys and invalid values raise ConfigError.
RunConfig run_config_from_json(const nlohmann::json& j);
/// "default" or a path to a JSON file.
RunConfig load_run_config(const std::string& spec);

/// Exit codes: 0 success, 1 pipeline failure, 2 usage or configuration error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gvb::cli
