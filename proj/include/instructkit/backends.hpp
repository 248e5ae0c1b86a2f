#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include "instructkit/teacher.hpp"

namespace ik::teacher {

/// Deterministic in-process teacher: reply = fn(request).
class MockBackend final : public Backend {
 public:
  using ReplyFn = std::function<std::string(const ChatRequest&)>;

  MockBackend();  // uses default_mock_reply
  explicit MockBackend(ReplyFn fn);

  BackendKind kind() const override { return BackendKind::deterministic_mock; }
  std::string chat(const ChatRequest& request) override;

  std::size_t calls() const { return calls_.load(); }

 private:
  ReplyFn fn_;
  std::atomic<std::size_t> calls_{0};
};

/// The stock mock teacher. It recognises the toolkit's rating, judge and
/// translation prompts and answers them in the expected format (scores come
/// from mock_quality); any other prompt gets a pseudo-random answer seeded by
/// the request, cut at max_tokens words.
std::string default_mock_reply(const ChatRequest& request);

/// Heuristic 1-10 quality used by the mock rater and judge: grows with the
/// number of distinct tokens, so longer, more varied answers score higher.
int mock_quality(std::string_view response);

/// On-disk key -> response store (one JSON line per entry). Readers share,
/// writers serialise; each put is flushed before returning.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path path);

  std::optional<std::string> get(const std::string& key) const;
  void put(const std::string& key, const std::string& value);
  std::size_t size() const;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, std::string> entries_;
};

/// Serves from the cache and forwards misses to `upstream`, storing
/// successful replies. Without an upstream a miss is an error.
class ReplayBackend final : public Backend {
 public:
  ReplayBackend(std::shared_ptr<ResponseCache> cache, std::shared_ptr<Backend> upstream = nullptr);

  BackendKind kind() const override { return BackendKind::replay_cache; }
  std::string chat(const ChatRequest& request) override;

  std::size_t hits() const { return hits_.load(); }
  std::size_t misses() const { return misses_.load(); }

 private:
  std::shared_ptr<ResponseCache> cache_;
  std::shared_ptr<Backend> upstream_;
  std::atomic<std::size_t> hits_{0};
  std::atomic<std::size_t> misses_{0};
};

struct HttpConfig {
  std::string url;      // full chat-completion endpoint, e.g. https://host/v1/chat/completions
  std::string api_key;  // sent as a bearer token when non-empty
  std::chrono::seconds timeout{120};

  /// Reads INSTRUCTKIT_TEACHER_URL and INSTRUCTKIT_TEACHER_API_KEY.
  static HttpConfig from_env();
};

/// Chat-completion client: one user message per request plus the decoding
/// hyperparameters. 429 and 5xx replies and transport failures are retryable.
class HttpBackend final : public Backend {
 public:
  explicit HttpBackend(HttpConfig config);

  BackendKind kind() const override { return BackendKind::live_http; }
  std::string chat(const ChatRequest& request) override;

  static json request_body(const ChatRequest& request);
  /// Extracts choices[0].message.content; ProtocolError carries the payload.
  static std::string parse_reply(const std::string& body);

 private:
  HttpConfig config_;
  std::string origin_;  // scheme://host[:port]
  std::string path_;
};

}  // namespace ik::teacher
