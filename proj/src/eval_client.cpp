#include "gvb/eval_client.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include <openssl/evp.h>

#include "httplib.h"
#include "gvb/errors.hpp"
#include "gvb/png.hpp"

namespace gvb {

using nlohmann::json;

void validate(const ModelEndpoint& e) {
  if (e.model_id.empty()) throw ConfigError("endpoint: model_id is empty");
  if (!(e.base_url.starts_with("http://") || e.base_url.starts_with("https://")))
    throw ConfigError("endpoint: base_url must start with http:// or https://, got '" + e.base_url + "'");
  const auto rest = e.base_url.substr(e.base_url.find("://") + 3);
  if (rest.empty() || rest.front() == '/') throw ConfigError("endpoint: base_url has no host");
  if (e.max_concurrency < 1) throw ConfigError("endpoint: max_concurrency must be at least 1");
  if (e.max_retries < 0) throw ConfigError("endpoint: max_retries must not be negative");
  if (!(e.request_timeout_s > 0.0)) throw ConfigError("endpoint: request_timeout must be positive");
  if (e.backoff_base_s < 0.0) throw ConfigError("endpoint: backoff must not be negative");
  if (e.api_key_env.empty()) throw ConfigError("endpoint: api_key_env is empty");
}

json to_json(const ModelEndpoint& e) {
  return {{"base_url", e.base_url},         {"model_id", e.model_id},
          {"api_key_env", e.api_key_env},   {"request_timeout_s", e.request_timeout_s},
          {"max_retries", e.max_retries},   {"max_concurrency", e.max_concurrency},
          {"backoff_base_s", e.backoff_base_s}};
}

ModelEndpoint endpoint_from_json(const json& j) {
  ModelEndpoint e;
  try {
    e.base_url = j.value("base_url", e.base_url);
    e.model_id = j.value("model_id", e.model_id);
    e.api_key_env = j.value("api_key_env", e.api_key_env);
    e.request_timeout_s = j.value("request_timeout_s", e.request_timeout_s);
    e.max_retries = j.value("max_retries", e.max_retries);
    e.max_concurrency = j.value("max_concurrency", e.max_concurrency);
    e.backoff_base_s = j.value("backoff_base_s", e.backoff_base_s);
  } catch (const json::exception& ex) {
    throw ConfigError(std::string("endpoint: ") + ex.what());
  }
  return e;
}

json to_json(const RawResponse& r) {
  return {{"instance_id", r.instance_id}, {"strategy", r.strategy},
          {"model_id", r.model_id},       {"text", r.text},
          {"latency_ms", r.latency_ms},   {"http_status", r.http_status},
          {"attempt_count", r.attempt_count}, {"error", r.error}};
}

RawResponse raw_response_from_json(const json& j) {
  RawResponse r;
  r.instance_id = j.at("instance_id").get<std::string>();
  r.strategy = j.at("strategy").get<std::string>();
  r.model_id = j.at("model_id").get<std::string>();
  r.text = j.value("text", "");
  r.latency_ms = j.value("latency_ms", 0.0);
  r.http_status = j.value("http_status", 0);
  r.attempt_count = j.value("attempt_count", 0);
  r.error = j.value("error", "");
  return r;
}

std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

json build_request_body(const std::string& model_id, const std::string& prompt,
                        const std::vector<std::uint8_t>& png) {
  json text_part{{"type", "text"}, {"text", prompt}};
  json image_part{{"type", "image_url"},
                  {"image_url", {{"url", "data:image/png;base64," + base64_encode(png)}}}};
  return {{"model", model_id},
          {"messages", json::array({{{"role", "user"}, {"content", json::array({text_part, image_part})}}})}};
}

std::optional<std::string> completion_text(const std::string& body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded()) return std::nullopt;
  try {
    const auto& content = j.at("choices").at(0).at("message").at("content");
    if (content.is_string()) return content.get<std::string>();
    if (content.is_array()) {  // list of parts
      std::string text;
      for (const auto& part : content)
        if (part.value("type", "") == "text") text += part.value("text", "");
      return text;
    }
  } catch (const json::exception&) {
  }
  return std::nullopt;
}

// ---- http ----

HttpBackend::HttpBackend(const ModelEndpoint& endpoint) : endpoint_(endpoint) {
  validate(endpoint_);
  const auto scheme_end = endpoint_.base_url.find("://") + 3;
  const auto slash = endpoint_.base_url.find('/', scheme_end);
  origin_ = endpoint_.base_url.substr(0, slash);
  std::string base_path = slash == std::string::npos ? "" : endpoint_.base_url.substr(slash);
  while (!base_path.empty() && base_path.back() == '/') base_path.pop_back();
  path_ = base_path + "/chat/completions";
  const char* key = std::getenv(endpoint_.api_key_env.c_str());
  if (!key || !*key) throw ConfigError("environment variable " + endpoint_.api_key_env + " is not set");
  key_ = key;
}

ChatReply HttpBackend::send(const ChatRequest& request) {
  httplib::Client client(origin_);
  const auto timeout = std::chrono::duration<double>(endpoint_.request_timeout_s);
  client.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
  client.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
  client.set_write_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
  httplib::Headers headers{{"Authorization", "Bearer " + key_}};
  ChatReply reply;
  auto res = client.Post(path_, headers, request.body, "application/json");
  if (!res) {
    reply.transport_error = httplib::to_string(res.error());
    return reply;
  }
  reply.http_status = res->status;
  if (res->status == 200) {
    auto text = completion_text(res->body);
    if (text)
      reply.text = *text;
    else
      reply.transport_error = "response without choices[0].message.content";
  } else {
    reply.text = res->body.substr(0, 2000);
  }
  return reply;
}

// ---- logs ----

std::string sanitize_model_id(const std::string& model_id) {
  std::string out;
  for (char c : model_id)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '_') ? c : '_';
  return out.empty() ? "_" : out;
}

std::filesystem::path response_log_path(const std::filesystem::path& root, const std::string& model_id,
                                        Strategy strategy) {
  return root / "runs" / sanitize_model_id(model_id) / (std::string(to_string(strategy)) + ".jsonl");
}

std::vector<RawResponse> read_responses(const std::filesystem::path& log_path) {
  std::vector<RawResponse> out;
  std::ifstream f(log_path, std::ios::binary);
  if (!f) return out;
  for (std::string line; std::getline(f, line);) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) continue;
    try {
      out.push_back(raw_response_from_json(j));
    } catch (const json::exception&) {
    }
  }
  return out;
}

std::vector<RawResponse> latest_responses(const std::vector<RawResponse>& log) {
  std::map<std::tuple<std::string, std::string, std::string>, std::size_t> slot;
  std::vector<RawResponse> out;
  for (const auto& r : log) {
    auto key = std::make_tuple(r.instance_id, r.strategy, r.model_id);
    auto it = slot.find(key);
    if (it == slot.end()) {
      slot.emplace(key, out.size());
      out.push_back(r);
    } else {
      out[it->second] = r;
    }
  }
  return out;
}

namespace {

/// Drops an incomplete final line left by an interrupted writer.
void repair_tail(const std::filesystem::path& path) {
  std::error_code ec;
  const auto size = std::filesystem::file_size(path, ec);
  if (ec || size == 0) return;
  std::ifstream f(path, std::ios::binary);
  std::string data((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  f.close();
  if (data.back() == '\n') return;
  const auto keep = data.rfind('\n');
  std::filesystem::resize_file(path, keep == std::string::npos ? 0 : keep + 1);
}

bool retryable(const ChatReply& r) {
  if (r.http_status == 0) return true;
  return r.http_status == 429 || r.http_status >= 500;
}

}  // namespace

EvalSummary evaluate(const std::vector<TaskInstance>& manifest, const ModelEndpoint& endpoint,
                     Backend& backend, const EvalOptions& options) {
  validate(endpoint);
  const std::string strategy(to_string(options.strategy));
  const PromptSet* prompts = options.prompts;
  PromptSet loaded;
  if (!prompts) {
    loaded = PromptSet::load(default_prompts_dir());
    prompts = &loaded;
  }

  std::set<std::string> done;
  for (const auto& r : latest_responses(read_responses(options.log_path)))
    if (r.model_id == endpoint.model_id && r.strategy == strategy && (r.ok() || !options.retry_failed))
      done.insert(r.instance_id);

  EvalSummary summary;
  std::vector<const TaskInstance*> pending;
  for (const auto& inst : manifest) {
    if (done.count(inst.instance_id)) {
      ++summary.skipped;
      continue;
    }
    pending.push_back(&inst);
  }
  if (options.max_requests && pending.size() > *options.max_requests) pending.resize(*options.max_requests);
  for (const auto* inst : pending) {
    const auto image = options.dataset_root / inst->image_path;
    if (!std::filesystem::is_regular_file(image)) throw ConfigError("image not readable: " + image.string());
  }

  if (!pending.empty()) {
    if (options.log_path.has_parent_path()) std::filesystem::create_directories(options.log_path.parent_path());
    if (std::filesystem::exists(options.log_path)) repair_tail(options.log_path);
  }
  std::ofstream log;
  if (!pending.empty()) {
    log.open(options.log_path, std::ios::binary | std::ios::app);
    if (!log) throw std::runtime_error("cannot write " + options.log_path.string());
  }
  std::mutex log_mutex;
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> failed{0};

  auto worker = [&] {
    for (std::size_t i; (i = next++) < pending.size();) {
      const TaskInstance& inst = *pending[i];
      RawResponse resp;
      resp.instance_id = inst.instance_id;
      resp.strategy = strategy;
      resp.model_id = endpoint.model_id;
      const auto start = std::chrono::steady_clock::now();
      try {
        ChatRequest req;
        req.instance = &inst;
        req.model_id = endpoint.model_id;
        req.prompt = render_prompt(prompts->get(inst.task, options.strategy), inst);
        req.body = build_request_body(endpoint.model_id, req.prompt,
                                      read_file_bytes(options.dataset_root / inst.image_path))
                       .dump();
        ChatReply reply;
        for (int attempt = 0;; ++attempt) {
          resp.attempt_count = attempt + 1;
          reply = backend.send(req);
          if (!retryable(reply) || attempt >= endpoint.max_retries) break;
          const double wait = endpoint.backoff_base_s * std::pow(2.0, attempt);
          if (wait > 0) std::this_thread::sleep_for(std::chrono::duration<double>(wait));
        }
        resp.http_status = reply.http_status;
        resp.text = reply.text;
        if (!reply.transport_error.empty())
          resp.error = reply.transport_error;
        else if (reply.http_status != 200)
          resp.error = "http " + std::to_string(reply.http_status);
      } catch (const std::exception& e) {
        resp.error = e.what();
      }
      resp.latency_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      if (!resp.ok()) ++failed;
      std::lock_guard lock(log_mutex);
      log << to_json(resp).dump() << '\n';
      log.flush();
    }
  };

  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(endpoint.max_concurrency), pending.size());
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (log.is_open()) log.close();

  summary.issued = pending.size();
  summary.failed = failed;
  for (auto& r : latest_responses(read_responses(options.log_path)))
    if (r.model_id == endpoint.model_id && r.strategy == strategy) summary.responses.push_back(std::move(r));
  return summary;
}

}  // namespace gvb
