#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "gvb/prompts.hpp"
#include "gvb/taskgen.hpp"

namespace gvb {

struct ModelEndpoint {
  /// Chat-completions root; requests go to `<base_url>/chat/completions`.
  std::string base_url = "https://openrouter.ai/api/v1";
  std::string model_id;
  /// Name of the environment variable holding the API key.
  std::string api_key_env = "OPENROUTER_API_KEY";
  double request_timeout_s = 120.0;
  int max_retries = 3;
  int max_concurrency = 4;
  /// First retry waits this long; each further retry doubles it.
  double backoff_base_s = 1.0;
};

/// Throws ConfigError for an empty model id, a non-http(s) URL, concurrency
/// < 1, negative retries or a non-positive timeout.
void validate(const ModelEndpoint& e);
nlohmann::json to_json(const ModelEndpoint& e);
ModelEndpoint endpoint_from_json(const nlohmann::json& j);

struct RawResponse {
  std::string instance_id;
  std::string strategy;
  std::string model_id;
  std::string text;
  double latency_ms = 0.0;
  int http_status = 0;  // 0 when no HTTP exchange completed
  int attempt_count = 0;
  /// Empty on success.
  std::string error;

  bool ok() const { return error.empty(); }
};

nlohmann::json to_json(const RawResponse& r);
RawResponse raw_response_from_json(const nlohmann::json& j);

/// One model call. `body` is the serialized wire request; mocks may also
/// look at `instance`.
struct ChatRequest {
  const TaskInstance* instance = nullptr;
  std::string model_id;
  std::string prompt;
  std::string body;
};

struct ChatReply {
  int http_status = 0;
  std::string text;
  /// Transport failure (no HTTP status) when non-empty.
  std::string transport_error;
};

class Backend {
 public:
  virtual ~Backend() = default;
  /// Must be safe to call from several threads at once.
  virtual ChatReply send(const ChatRequest& request) = 0;
};

/// Wire body: one user message whose content holds a text part and an
/// image_url part carrying the PNG as a base64 data URL. No sampling
/// parameters are set, so provider defaults apply.
nlohmann::json build_request_body(const std::string& model_id, const std::string& prompt,
                                  const std::vector<std::uint8_t>& png);
std::string base64_encode(const std::vector<std::uint8_t>& bytes);
/// choices[0].message.content of a completion body, if present.
std::optional<std::string> completion_text(const std::string& body);

/// OpenAI-compatible HTTP(S) client. The key is read from the environment
/// at construction (ConfigError if unset) and only ever sent as a header.
class HttpBackend : public Backend {
 public:
  explicit HttpBackend(const ModelEndpoint& endpoint);
  ChatReply send(const ChatRequest& request) override;

 private:
  ModelEndpoint endpoint_;
  std::string origin_;  // scheme://host[:port]
  std::string path_;    // .../chat/completions
  std::string key_;
};

struct EvalOptions {
  Strategy strategy = Strategy::zero_shot;
  /// Image paths in the manifest are relative to this directory.
  std::filesystem::path dataset_root;
  /// Append-only response log.
  std::filesystem::path log_path;
  /// Re-query items whose logged response failed.
  bool retry_failed = false;
  /// Stop after issuing this many new requests (used to simulate a killed run).
  std::optional<std::size_t> max_requests;
  /// Templates; the shipped set when null.
  const PromptSet* prompts = nullptr;
};

struct EvalSummary {
  std::size_t issued = 0;   // requests sent during this call
  std::size_t skipped = 0;  // already in the log
  std::size_t failed = 0;   // failures among the issued requests
  /// Latest logged response per instance for this model and strategy.
  std::vector<RawResponse> responses;
};

/// One request per (instance, strategy), at most endpoint.max_concurrency in
/// flight. Transport errors, 429 and 5xx are retried up to max_retries with
/// exponential backoff; what remains is logged as a failure. Every response is
/// appended to the log and flushed before the next is taken, so a restarted
/// run skips what was completed.
EvalSummary evaluate(const std::vector<TaskInstance>& manifest, const ModelEndpoint& endpoint,
                     Backend& backend, const EvalOptions& options);

/// `<root>/runs/<model>/<strategy>.jsonl`
std::filesystem::path response_log_path(const std::filesystem::path& root, const std::string& model_id,
                                        Strategy strategy);
/// Model id made safe for a directory name.
std::string sanitize_model_id(const std::string& model_id);

/// All parseable lines of a log (an interrupted last line is skipped).
std::vector<RawResponse> read_responses(const std::filesystem::path& log_path);
/// Keeps the last entry per (instance_id, strategy, model_id), in first-seen order.
std::vector<RawResponse> latest_responses(const std::vector<RawResponse>& log);

}  // namespace gvb
