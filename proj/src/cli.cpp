#include "gvb/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "gvb/errors.hpp"
#include "gvb/manifest.hpp"
#include "gvb/mock_backend.hpp"
#include "gvb/report.hpp"
#include "gvb/scoring.hpp"

namespace gvb::cli {

using nlohmann::json;

json to_json(const RunConfig& c) {
  json e = gvb::to_json(c.endpoint);
  e.erase("model_id");
  return {{"dataset", gvb::to_json(c.dataset)}, {"endpoint", e},
          {"models", c.models},                 {"strategies", c.strategies},
          {"concurrency", c.concurrency},       {"out", c.out}};
}

RunConfig run_config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("run config must be a JSON object");
  static const std::vector<std::string> keys{"dataset", "endpoint", "models", "strategies", "concurrency", "out"};
  for (const auto& [k, v] : j.items())
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) throw ConfigError("unknown config field: " + k);
  RunConfig c;
  if (j.contains("dataset")) c.dataset = dataset_config_from_json(j.at("dataset"));
  if (j.contains("endpoint")) {
    const auto& e = j.at("endpoint");
    if (!e.is_object()) throw ConfigError("endpoint must be an object");
    const json known = gvb::to_json(ModelEndpoint{});
    for (const auto& [k, v] : e.items())
      if (!known.contains(k) || k == "model_id") throw ConfigError("unknown config field: endpoint." + k);
    c.endpoint = endpoint_from_json(e);
  }
  try {
    c.models = j.value("models", c.models);
    c.strategies = j.value("strategies", c.strategies);
    c.concurrency = j.value("concurrency", c.concurrency);
    c.out = j.value("out", c.out);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  for (const auto& s : c.strategies) {
    if (s != "zero_shot" && s != "cot") throw ConfigError("strategies: unknown strategy '" + s + "'");
  }
  if (c.concurrency < 1) throw ConfigError("concurrency must be at least 1");
  return c;
}

RunConfig load_run_config(const std::string& spec) {
  if (spec == "default") return RunConfig{};
  std::ifstream f(spec, std::ios::binary);
  if (!f) throw ConfigError("cannot read config " + spec);
  json j = json::parse(f, nullptr, false);
  if (j.is_discarded()) throw ConfigError(spec + ": not valid JSON");
  return run_config_from_json(j);
}

namespace {

struct Flags {
  std::string config = "default";
  std::string out;
  std::vector<std::string> models;
  std::string strategy;
  int concurrency = 0;
  std::optional<std::uint64_t> seed;
  std::string mock;
  bool retry_failed = false;
  std::optional<std::size_t> max_requests;
  std::string base_url;
  std::string api_key_env;
  std::optional<int> max_retries;
  std::optional<double> backoff;
  std::vector<std::string> responses;
  std::string dims;
  bool print_config = false;
};

std::string fmt_mean(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

void print_table(const AggregateTable& t, std::ostream& out) {
  for (const auto& d : t.dims) out << d << '\t';
  out << "mean\tcount\n";
  for (const auto& r : t.rows) {
    for (const auto& k : r.key) out << k << '\t';
    out << fmt_mean(r.mean) << '\t' << r.count << '\n';
  }
}

std::vector<std::string> strategies_for(const Flags& f, const RunConfig& c) {
  if (f.strategy.empty()) return c.strategies;
  if (f.strategy == "both") return {"zero_shot", "cot"};
  return {f.strategy};
}

std::vector<TaskInstance> load_manifest(const std::filesystem::path& root) {
  const auto path = manifest_path(root);
  if (!std::filesystem::exists(path)) throw ConfigError("no manifest at " + path.string() + " (run generate first)");
  return read_manifest(path);
}

int cmd_generate(const RunConfig& c, std::ostream& out) {
  const std::filesystem::path root = c.out;
  const auto rows = generate_dataset(c.dataset, root, static_cast<unsigned>(c.concurrency));
  std::map<int, int> per_task;
  for (const auto& r : rows) ++per_task[r.task];
  for (auto [t, n] : per_task) out << "task " << t << ": " << n << " instances\n";
  out << "total: " << rows.size() << " instances, manifest " << manifest_path(root).string() << '\n';
  return 0;
}

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto rows = load_manifest(c.out);
  const auto report = verify_dataset(rows, c.out, static_cast<unsigned>(c.concurrency));
  for (const auto& p : report.problems) err << "verify: " << p << '\n';
  out << "checked " << report.checked << " instances, " << report.problems.size() << " problems\n";
  return report.ok() ? 0 : 1;
}

int cmd_evaluate(const Flags& f, const RunConfig& c, std::ostream& out) {
  std::vector<std::string> models = f.models.empty() ? c.models : f.models;
  if (models.empty() && !f.mock.empty()) models.push_back("mock-" + f.mock.substr(0, f.mock.find(':')));
  if (models.empty()) throw ConfigError("no model given (--model or models in the config)");
  const auto strategies = strategies_for(f, c);
  const auto manifest = load_manifest(c.out);
  const PromptSet prompts = PromptSet::load(default_prompts_dir());

  std::vector<std::pair<ModelEndpoint, std::unique_ptr<Backend>>> runs;
  for (const auto& m : models) {
    ModelEndpoint e = c.endpoint;
    e.model_id = m;
    validate(e);
    std::unique_ptr<Backend> backend;
    if (!f.mock.empty())
      backend = make_mock_backend(f.mock);
    else
      backend = std::make_unique<HttpBackend>(e);
    runs.emplace_back(e, std::move(backend));
  }
  int failures = 0;
  for (auto& [endpoint, backend] : runs)
    for (const auto& s : strategies) {
      EvalOptions opt;
      opt.strategy = strategy_from_string(s);
      opt.dataset_root = c.out;
      opt.log_path = response_log_path(c.out, endpoint.model_id, opt.strategy);
      opt.retry_failed = f.retry_failed;
      opt.max_requests = f.max_requests;
      opt.prompts = &prompts;
      const auto summary = evaluate(manifest, endpoint, *backend, opt);
      std::size_t bad = 0;
      for (const auto& r : summary.responses) bad += r.ok() ? 0 : 1;
      out << endpoint.model_id << " " << s << ": " << summary.issued << " requested, " << summary.skipped
          << " already logged, " << summary.responses.size() << " responses (" << bad << " failed) -> "
          << opt.log_path.string() << '\n';
      failures += static_cast<int>(summary.failed);
    }
  if (failures > 0) out << failures << " requests failed; rerun with --retry-failed to query them again\n";
  return 0;
}

std::vector<std::filesystem::path> log_files(const std::vector<std::string>& inputs) {
  std::vector<std::filesystem::path> files;
  for (const auto& in : inputs) {
    const std::filesystem::path p = in;
    if (std::filesystem::is_directory(p)) {
      for (const auto& e : std::filesystem::recursive_directory_iterator(p))
        if (e.is_regular_file() && e.path().extension() == ".jsonl") files.push_back(e.path());
    } else if (std::filesystem::is_regular_file(p)) {
      files.push_back(p);
    } else {
      throw ConfigError("no responses at " + in);
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

int cmd_score(const Flags& f, const RunConfig& c, std::ostream& out) {
  const auto manifest = load_manifest(c.out);
  std::vector<std::string> inputs = f.responses;
  if (inputs.empty()) inputs.push_back((std::filesystem::path(c.out) / "runs").string());
  std::vector<RawResponse> responses;
  for (const auto& file : log_files(inputs))
    for (auto& r : read_responses(file)) responses.push_back(std::move(r));
  if (responses.empty()) throw ConfigError("no responses found");
  const auto records = score_responses(manifest, responses);
  const auto files = write_scores(c.out, records);
  print_table(aggregate(records, {"model", "strategy", "task"}), out);
  for (const auto& p : files) out << "wrote " << p.string() << '\n';
  return 0;
}

int cmd_report(const Flags& f, const RunConfig& c, std::ostream& out) {
  const auto scores = read_all_scores(c.out);
  if (scores.empty()) throw ConfigError("no score files under " + c.out + "/scores (run score first)");
  std::vector<std::string> dims{"model", "task", "strategy"};
  if (!f.dims.empty()) {
    dims.clear();
    std::stringstream in(f.dims);
    for (std::string d; std::getline(in, d, ',');)
      if (!d.empty()) dims.push_back(d);
  }
  for (const auto& d : dims)
    if (std::find(std::begin(kReportDims), std::end(kReportDims), d) == std::end(kReportDims))
      throw ConfigError("unknown report dimension '" + d + "'");
  auto files = write_standard_report(c.out, scores);
  const auto table = aggregate(scores, dims);
  if (!f.dims.empty()) {
    std::string name = "custom";
    for (const auto& d : dims) name += "_" + d;
    for (auto [ext, fmt] : {std::pair{".csv", ExportFormat::csv}, std::pair{".json", ExportFormat::json}}) {
      const auto path = std::filesystem::path(c.out) / "report" / (name + ext);
      export_table(table, path, fmt);
      files.push_back(path);
    }
  }
  print_table(table, out);
  out << "wrote " << files.size() << " tables to " << (std::filesystem::path(c.out) / "report").string() << '\n';
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Visual graph benchmark: dataset generation, model evaluation and scoring", "gvb"};
  app.require_subcommand(1, 1);
  Flags f;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", f.config, "Run config: 'default' or a JSON file")->capture_default_str();
    sub->add_option("--out", f.out, "Output root (dataset/, runs/, scores/, report/)");
    sub->add_option("--concurrency", f.concurrency, "Worker threads / in-flight requests")
        ->check(CLI::PositiveNumber);
  };
  auto* gen = app.add_subcommand("generate", "Generate images, ground truth and the manifest");
  common(gen);
  gen->add_option("--seed", f.seed, "Dataset seed");
  gen->add_flag("--print-config", f.print_config, "Print the resolved config and exit");

  auto* ev = app.add_subcommand("evaluate", "Query models over the manifest");
  common(ev);
  ev->add_option("--model", f.models, "Model id (repeatable)");
  ev->add_option("--strategy", f.strategy, "Prompt strategy")
      ->check(CLI::IsMember({"zero_shot", "cot", "both"}));
  ev->add_option("--mock", f.mock, "Offline backend: oracle, noisy[:seed] or fixture:<path>");
  ev->add_flag("--retry-failed", f.retry_failed, "Query again items whose logged response failed");
  ev->add_option("--max-requests", f.max_requests, "Stop after this many new requests");
  ev->add_option("--base-url", f.base_url, "Chat-completions base URL");
  ev->add_option("--api-key-env", f.api_key_env, "Environment variable holding the API key");
  ev->add_option("--max-retries", f.max_retries, "Retries per request")->check(CLI::NonNegativeNumber);
  ev->add_option("--backoff", f.backoff, "First retry delay in seconds")->check(CLI::NonNegativeNumber);

  auto* sc = app.add_subcommand("score", "Parse responses and score them");
  common(sc);
  sc->add_option("--responses", f.responses, "Response logs or directories (default <out>/runs)");

  auto* rep = app.add_subcommand("report", "Aggregate scores into tables");
  common(rep);
  rep->add_option("--dims", f.dims, "Comma-separated dimensions for the printed table");

  auto* ver = app.add_subcommand("verify", "Re-check every truth and image hash");
  common(ver);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    RunConfig c = load_run_config(f.config);
    if (!f.out.empty()) c.out = f.out;
    if (f.concurrency > 0) c.concurrency = f.concurrency;
    if (f.seed) c.dataset.seed = *f.seed;
    if (!f.base_url.empty()) c.endpoint.base_url = f.base_url;
    if (!f.api_key_env.empty()) c.endpoint.api_key_env = f.api_key_env;
    if (f.max_retries) c.endpoint.max_retries = *f.max_retries;
    if (f.backoff) c.endpoint.backoff_base_s = *f.backoff;
    c.endpoint.max_concurrency = c.concurrency;
    validate(c.dataset);
    if (!f.mock.empty() && !f.mock.starts_with("fixture:") && f.mock != "oracle" && f.mock != "noisy" &&
        !f.mock.starts_with("noisy:"))
      throw ConfigError("unknown mock backend '" + f.mock + "'");

    if (gen->parsed()) {
      if (f.print_config) {
        out << to_json(c).dump(2) << '\n';
        return 0;
      }
      return cmd_generate(c, out);
    }
    if (ev->parsed()) return cmd_evaluate(f, c, out);
    if (sc->parsed()) return cmd_score(f, c, out);
    if (rep->parsed()) return cmd_report(f, c, out);
    return cmd_verify(c, out, err);
  } catch (const ConfigError& e) {
    err << "gvb: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "gvb: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace gvb::cli
