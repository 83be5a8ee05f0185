#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "gvb/eval_client.hpp"

namespace gvb {

/// Offline backend with request instrumentation. Subclasses produce the
/// answer text; the base counts requests and tracks the in-flight peak.
class MockBackend : public Backend {
 public:
  ChatReply send(const ChatRequest& request) final;

  std::size_t requests() const { return requests_; }
  int max_in_flight() const { return max_in_flight_; }
  /// Requests seen per instance id.
  std::map<std::string, int> request_counts() const;

  /// Each call sleeps this long, making overlap observable.
  void set_delay_ms(int ms) { delay_ms_ = ms; }
  /// The first `n` requests per instance answer 503.
  void set_transient_failures(int n) { transient_failures_ = n; }

 protected:
  virtual std::string answer(const ChatRequest& request) = 0;

 private:
  std::atomic<std::size_t> requests_{0};
  std::atomic<int> in_flight_{0};
  std::atomic<int> max_in_flight_{0};
  int delay_ms_ = 0;
  int transient_failures_ = 0;
  mutable std::mutex counts_mutex_;
  std::map<std::string, int> counts_;
};

/// JSON answer text that scores full marks for `inst`.
std::string oracle_answer(const TaskInstance& inst);

class OracleBackend : public MockBackend {
 protected:
  std::string answer(const ChatRequest& request) override;
};

struct NoiseParams {
  /// Task 1 counts are off by a uniform integer in [-node_error, node_error]
  /// (edges: edge_error).
  int node_error = 1;
  int edge_error = 2;
  /// Other tasks: probability of a wrong answer.
  double flip_probability = 0.2;
  std::uint64_t seed = 7;
};

/// Perturbed oracle answers; deterministic per (seed, instance, strategy prompt).
class NoisyBackend : public MockBackend {
 public:
  explicit NoisyBackend(NoiseParams params = {}) : params_(params) {}

 protected:
  std::string answer(const ChatRequest& request) override;

 private:
  NoiseParams params_;
};

/// Replays canned texts from a JSONL file of {"instance_id"?, "task"?, "text"}.
/// An entry with instance_id answers that instance; otherwise entries of the
/// instance's task are used in turn (chosen by instance id hash).
/// Instances with no entry get an empty reply.
class FixtureBackend : public MockBackend {
 public:
  /// Throws ConfigError when the file is missing or malformed.
  explicit FixtureBackend(const std::filesystem::path& file);

 protected:
  std::string answer(const ChatRequest& request) override;

 private:
  std::map<std::string, std::string> by_id_;
  std::map<int, std::vector<std::string>> by_task_;
};

/// "oracle", "noisy", "noisy:<seed>" or "fixture:<path>".
std::unique_ptr<MockBackend> make_mock_backend(const std::string& spec);

}  // namespace gvb
