#include "fmeval/llm_backend.hpp"

#include <httplib.h>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include "fmeval/digest.hpp"
#include "fmeval/errors.hpp"
#include "fmeval/text.hpp"

namespace fmeval {

using nlohmann::json;

namespace {

std::atomic<std::uint64_t> g_network_calls{0};

class CountingSemaphore {
 public:
  explicit CountingSemaphore(int slots) : slots_(slots) {}

  void acquire() {
    std::unique_lock lock(mutex_);
    cv_.wait(lock, [&] { return slots_ > 0; });
    --slots_;
  }

  void release() {
    {
      std::lock_guard lock(mutex_);
      ++slots_;
    }
    cv_.notify_one();
  }

 private:
  std::mutex mutex_;
  std::condition_variable cv_;
  int slots_;
};

struct SemaphoreGuard {
  explicit SemaphoreGuard(CountingSemaphore& sem) : sem_(sem) { sem_.acquire(); }
  ~SemaphoreGuard() { sem_.release(); }
  CountingSemaphore& sem_;
};

struct ParsedUrl {
  std::string scheme_host_port;  // what httplib::Client wants
  std::string path_prefix;       // empty or "/v1"-style prefix
};

ParsedUrl parse_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(Errc::config_error, "base_url must carry a scheme: " + url);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, ""};
  std::string prefix = url.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {url.substr(0, path_start), prefix};
}

// ---- rule-based mock -------------------------------------------------------

// Pulls the trailing "Input:" block out of an extraction prompt.
std::string extraction_input(const std::string& prompt) {
  const auto pos = prompt.rfind("\nInput: ");
  if (pos == std::string::npos) return prompt;
  return prompt.substr(pos + 8);
}

// Maps labeled abstracts (BACKGROUND: ... METHODS: ...) straight to facet
// segments; unlabeled text lands in "background".
json mock_extract(const std::string& abstract) {
  static const std::vector<std::pair<std::string, std::string>> kLabels = {
      {"BACKGROUND:", "background"}, {"OBJECTIVE:", "background"}, {"METHODS:", "method"},
      {"METHOD:", "method"},         {"RESULTS:", "result"},       {"RESULT:", "result"},
      {"CONCLUSIONS:", "conclusion"}, {"CONCLUSION:", "conclusion"}};
  struct Hit {
    std::size_t pos;
    std::size_t len;
    std::string facet;
  };
  std::vector<Hit> hits;
  for (const auto& [label, facet] : kLabels) {
    std::size_t from = 0;
    while (true) {
      const auto pos = abstract.find(label, from);
      if (pos == std::string::npos) break;
      hits.push_back({pos, label.size(), facet});
      from = pos + label.size();
    }
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.pos < b.pos; });
  json out = {{"background", ""}, {"method", ""}, {"result", ""}, {"conclusion", ""}};
  if (hits.empty()) {
    out["background"] = normalize_whitespace(abstract);
    return out;
  }
  for (std::size_t i = 0; i < hits.size(); ++i) {
    const std::size_t begin = hits[i].pos + hits[i].len;
    const std::size_t end = (i + 1 < hits.size()) ? hits[i + 1].pos : abstract.size();
    std::string segment = normalize_whitespace(abstract.substr(begin, end - begin));
    if (segment.empty()) continue;
    std::string& slot = out[hits[i].facet].get_ref<std::string&>();
    if (!slot.empty()) slot += " ";
    slot += segment;
  }
  return out;
}

// Clipped unigram recall of input1 in input2.
double mock_recall(const std::string& input1, const std::string& input2) {
  const auto ref = tokenize(input1);
  const auto hyp = tokenize(input2);
  if (ref.empty()) return 1.0;
  std::map<std::string, int> counts;
  for (const auto& token : hyp) ++counts[token];
  int overlap = 0;
  for (const auto& token : ref) {
    auto it = counts.find(token);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  return static_cast<double>(overlap) / static_cast<double>(ref.size());
}

std::string mock_rate(const std::string& prompt) {
  const int scale = prompt.find("(1-4)") != std::string::npos ? 4 : 3;
  const auto in1_pos = prompt.rfind("Input1: ");
  const auto in2_pos = prompt.rfind("Input2: ");
  const auto num_pos = prompt.rfind("\nNumber:");
  if (in1_pos == std::string::npos || in2_pos == std::string::npos || in2_pos < in1_pos) {
    return "1";
  }
  const std::string input1 = prompt.substr(in1_pos + 8, in2_pos - (in1_pos + 8));
  const std::string input2 =
      (num_pos != std::string::npos && num_pos > in2_pos)
          ? prompt.substr(in2_pos + 8, num_pos - (in2_pos + 8))
          : prompt.substr(in2_pos + 8);
  if (is_blank(input2)) return "1";
  const double recall = mock_recall(input1, input2);
  const int value = 1 + static_cast<int>(std::lround(recall * (scale - 1)));
  return std::to_string(std::min(value, scale));
}

std::string mock_complete(const CompletionRequest& request) {
  if (request.prompt.find("Return the answer in JSON format") != std::string::npos) {
    return mock_extract(extraction_input(request.prompt)).dump();
  }
  if (request.prompt.find("Only return the number.") != std::string::npos) {
    return mock_rate(request.prompt);
  }
  return "";
}

}  // namespace

std::string request_digest(const CompletionRequest& request, const std::string& resolved_model) {
  const json canonical = {{"max_tokens", request.max_tokens},
                          {"model", resolved_model},
                          {"prompt", request.prompt},
                          {"temperature", request.temperature}};
  return sha256_hex(canonical.dump());
}

long estimate_tokens(std::string_view text) {
  return static_cast<long>((text.size() + 3) / 4);
}

std::uint64_t network_call_count() { return g_network_calls.load(); }

void reset_network_call_count() { g_network_calls.store(0); }

struct LlmClient::Impl {
  BackendConfig config;
  Handler handler;
  CountingSemaphore semaphore;
  std::mutex cache_write_mutex;

  Impl(BackendConfig cfg, Handler h)
      : config(std::move(cfg)), handler(std::move(h)), semaphore(config.max_parallel) {}

  std::filesystem::path cache_path(const std::string& digest) const {
    return *config.cache_dir / (digest + ".json");
  }

  std::optional<CompletionResponse> cache_lookup(const std::string& digest) const {
    if (!config.cache_dir) return std::nullopt;
    std::ifstream in(cache_path(digest));
    if (!in) return std::nullopt;
    json entry;
    try {
      entry = json::parse(in);
    } catch (const json::parse_error&) {
      return std::nullopt;  // damaged entry: treat as a miss and refetch
    }
    CompletionResponse response;
    response.text = entry.at("response").at("text").get<std::string>();
    response.token_counts.prompt = entry.at("response").value("prompt_tokens", 0L);
    response.token_counts.completion = entry.at("response").value("completion_tokens", 0L);
    response.cache_hit = true;
    return response;
  }

  void cache_store(const std::string& digest, const CompletionRequest& request,
                   const std::string& model, const CompletionResponse& response) {
    if (!config.cache_dir) return;
    std::lock_guard lock(cache_write_mutex);
    std::error_code ec;
    std::filesystem::create_directories(*config.cache_dir, ec);
    const json entry = {{"request",
                         {{"max_tokens", request.max_tokens},
                          {"model", model},
                          {"prompt", request.prompt},
                          {"tag", request.tag},
                          {"temperature", request.temperature}}},
                        {"response",
                         {{"completion_tokens", response.token_counts.completion},
                          {"prompt_tokens", response.token_counts.prompt},
                          {"text", response.text}}}};
    const auto target = cache_path(digest);
    const auto tmp = target.string() + ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw Error(Errc::io_error, "cannot write cache entry " + tmp, request.tag);
      out << entry.dump(2) << "\n";
    }
    std::filesystem::rename(tmp, target, ec);
    if (ec) throw Error(Errc::io_error, "cannot finalize cache entry: " + ec.message(), request.tag);
  }

  CompletionResponse transport(const CompletionRequest& request, const std::string& model) {
    if (handler) {
      CompletionResponse response;
      response.text = handler(request);
      response.token_counts.prompt = estimate_tokens(request.prompt);
      response.token_counts.completion = estimate_tokens(response.text);
      return response;
    }
    if (config.base_url.starts_with("mock://")) {
      CompletionResponse response;
      response.text = mock_complete(request);
      response.token_counts.prompt = estimate_tokens(request.prompt);
      response.token_counts.completion = estimate_tokens(response.text);
      return response;
    }
    return http_transport(request, model);
  }

  CompletionResponse http_transport(const CompletionRequest& request, const std::string& model) {
    const ParsedUrl url = parse_url(config.base_url);
    const std::string endpoint =
        (url.path_prefix.empty() ? "/v1" : url.path_prefix) + "/chat/completions";

    httplib::Client client(url.scheme_host_port);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config.timeout);
    client.set_connection_timeout(std::max<long>(1, secs.count()), 0);
    client.set_read_timeout(std::max<long>(1, secs.count()), 0);

    httplib::Headers headers;
    if (const char* token = std::getenv(config.auth_env_var.c_str()); token && *token) {
      headers.emplace("Authorization", std::string("Bearer ") + token);
    }
    const json body = {{"model", model},
                       {"messages", json::array({{{"role", "user"}, {"content", request.prompt}}})},
                       {"temperature", request.temperature},
                       {"max_tokens", request.max_tokens}};
    const std::string payload = body.dump();

    bool saw_rate_limit = false;
    bool saw_timeout = false;
    std::string last_detail;
    for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
      if (attempt > 0) {
        std::this_thread::sleep_for(
            std::chrono::milliseconds(config.retry_backoff_ms << (attempt - 1)));
      }
      g_network_calls.fetch_add(1);
      auto result = client.Post(endpoint, headers, payload, "application/json");
      if (!result) {
        if (result.error() == httplib::Error::ConnectionTimeout ||
            result.error() == httplib::Error::Read || result.error() == httplib::Error::Write) {
          saw_timeout = true;
        }
        last_detail = httplib::to_string(result.error());
        continue;
      }
      if (result->status == 401 || result->status == 403) {
        throw Error(Errc::auth_error, "endpoint rejected credentials (HTTP " +
                                          std::to_string(result->status) + ")",
                    request.tag);
      }
      if (result->status == 429) {
        saw_rate_limit = true;
        last_detail = "HTTP 429";
        continue;
      }
      if (result->status >= 500) {
        last_detail = "HTTP " + std::to_string(result->status);
        continue;
      }
      if (result->status != 200) {
        throw Error(Errc::transport_error,
                    "unexpected HTTP " + std::to_string(result->status) + ": " + result->body,
                    request.tag);
      }
      return parse_chat_completion(result->body, request);
    }
    if (saw_rate_limit) {
      throw Error(Errc::rate_limit_exhausted,
                  "rate limited after " + std::to_string(config.max_retries + 1) + " attempts",
                  request.tag);
    }
    if (saw_timeout) {
      throw Error(Errc::timeout_error, "timed out after retries: " + last_detail, request.tag);
    }
    throw Error(Errc::transport_error, "endpoint unreachable: " + last_detail, request.tag);
  }

  CompletionResponse parse_chat_completion(const std::string& body,
                                           const CompletionRequest& request) {
    json doc;
    try {
      doc = json::parse(body);
    } catch (const json::parse_error& e) {
      throw Error(Errc::transport_error, std::string("malformed completion JSON: ") + e.what(),
                  request.tag);
    }
    CompletionResponse response;
    try {
      response.text = doc.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception&) {
      throw Error(Errc::transport_error, "completion JSON lacks choices[0].message.content",
                  request.tag);
    }
    if (doc.contains("usage") && doc["usage"].is_object()) {
      response.token_counts.prompt = doc["usage"].value("prompt_tokens", 0L);
      response.token_counts.completion = doc["usage"].value("completion_tokens", 0L);
    } else {
      response.token_counts.prompt = estimate_tokens(request.prompt);
      response.token_counts.completion = estimate_tokens(response.text);
    }
    return response;
  }
};

LlmClient::LlmClient(BackendConfig config) : LlmClient(std::move(config), Handler{}) {}

LlmClient::LlmClient(BackendConfig config, Handler handler) {
  if (config.max_parallel < 1) {
    throw Error(Errc::config_error, "max_parallel must be >= 1");
  }
  impl_ = std::make_unique<Impl>(std::move(config), std::move(handler));
}

LlmClient::~LlmClient() = default;

const BackendConfig& LlmClient::config() const { return impl_->config; }

CompletionResponse LlmClient::complete(const CompletionRequest& request, CacheRead cache_read) {
  if (request.prompt.empty()) {
    throw Error(Errc::empty_input, "completion prompt must be non-empty", request.tag);
  }
  if (request.temperature < 0.0) {
    throw Error(Errc::range_error, "temperature must be >= 0", request.tag);
  }
  if (request.max_tokens < 1) {
    throw Error(Errc::range_error, "max_tokens must be positive", request.tag);
  }
  const std::string model = request.model.empty() ? impl_->config.model : request.model;
  const std::string digest = request_digest(request, model);

  if (cache_read == CacheRead::use) {
    if (auto cached = impl_->cache_lookup(digest)) return *cached;
  }
  if (impl_->config.replay_only) {
    throw Error(Errc::transport_error, "replay cache miss for digest " + digest, request.tag);
  }
  CompletionResponse response;
  {
    SemaphoreGuard guard(impl_->semaphore);
    response = impl_->transport(request, model);
  }
  impl_->cache_store(digest, request, model, response);
  return response;
}

CompletionResponse complete(const BackendConfig& config, const CompletionRequest& request) {
  LlmClient client(config);
  return client.complete(request);
}

double token_overhead(const std::vector<CompletionResponse>& responses, long baseline_tokens) {
  if (baseline_tokens <= 0) throw Error(Errc::range_error, "baseline_tokens must be > 0");
  long total = 0;
  for (const auto& response : responses) {
    total += response.token_counts.prompt + response.token_counts.completion;
  }
  return static_cast<double>(total - baseline_tokens) / static_cast<double>(baseline_tokens);
}

}  // namespace fmeval
