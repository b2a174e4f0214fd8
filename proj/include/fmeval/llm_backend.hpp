#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace fmeval {

struct CompletionRequest {
  std::string prompt;
  std::string model;  // empty -> BackendConfig::model
  double temperature = 0.0;
  int max_tokens = 1024;
  std::string tag;  // free-form label for error/report attribution
};

struct TokenCounts {
  long prompt = 0;
  long completion = 0;
};

struct CompletionResponse {
  std::string text;
  TokenCounts token_counts;
  bool cache_hit = false;
};

// Backend selection happens through base_url:
//   http://... | https://...  remote OpenAI-style chat-completion endpoint
//   mock://rules              deterministic rule-based backend for tests
// With replay_only set, only the cache is consulted and a miss is a
// TransportError; no transport is ever constructed.
struct BackendConfig {
  std::string base_url = "mock://rules";
  std::string model = "mock-judge";
  std::string auth_env_var = "FMEVAL_API_KEY";
  std::chrono::milliseconds timeout{30000};
  int max_retries = 3;
  int max_parallel = 4;
  std::optional<std::filesystem::path> cache_dir;
  bool replay_only = false;
  int retry_backoff_ms = 250;  // doubles per attempt
};

// Cache key: sha256 over the canonical JSON of
// {max_tokens, model, prompt, temperature}. The tag is attribution only.
std::string request_digest(const CompletionRequest& request, const std::string& resolved_model);

enum class CacheRead { use, bypass };

class LlmClient {
 public:
  using Handler = std::function<std::string(const CompletionRequest&)>;

  explicit LlmClient(BackendConfig config);
  // Test hook: overrides text generation while keeping cache and concurrency
  // behavior.
  LlmClient(BackendConfig config, Handler handler);
  ~LlmClient();

  LlmClient(const LlmClient&) = delete;
  LlmClient& operator=(const LlmClient&) = delete;

  // Thread-safe; at most max_parallel transport calls are in flight.
  CompletionResponse complete(const CompletionRequest& request,
                              CacheRead cache_read = CacheRead::use);

  const BackendConfig& config() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// One-shot convenience wrapper.
CompletionResponse complete(const BackendConfig& config, const CompletionRequest& request);

// (total pipeline tokens - baseline) / baseline.
double token_overhead(const std::vector<CompletionResponse>& responses, long baseline_tokens);

// Crude deterministic token estimate used by the mock backend and the audit
// report when an endpoint does not return usage numbers.
long estimate_tokens(std::string_view text);

// Process-wide count of HTTP attempts; lets tests assert that replay runs
// perform no network activity.
std::uint64_t network_call_count();
void reset_network_call_count();

}  // namespace fmeval
