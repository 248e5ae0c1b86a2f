#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include "instructkit/error.hpp"
#include "instructkit/records.hpp"

namespace ik::teacher {

/// The two instruction prompt layouts. Bodies carry `{instruction}` and
/// `{input}` placeholders.
struct TemplateSet {
  std::string prompt_input;
  std::string prompt_no_input;

  /// The byte sequence used for the released Alpaca-format data.
  static TemplateSet alpaca();
  /// Loads {"prompt_input": ..., "prompt_no_input": ...}; validates placeholders.
  static TemplateSet from_json(const json& j);

  /// Short content hash recorded in provenance and cache keys.
  std::string version() const;

  friend bool operator==(const TemplateSet&, const TemplateSet&) = default;
};

/// Throws ValidationError unless prompt_input has each placeholder exactly
/// once and prompt_no_input has {instruction} once and {input} never.
void validate(const TemplateSet& templates);

/// Picks the branch by presence of the input and substitutes verbatim.
std::string render_prompt(const InstructionInstance& instance, const TemplateSet& templates = TemplateSet::alpaca());

struct DecodingConfig {
  std::string model = "gpt-4";
  double temperature = 1.0;
  double top_p = 1.0;  // nucleus over the whole vocabulary
  std::int64_t max_tokens = 512;

  friend bool operator==(const DecodingConfig&, const DecodingConfig&) = default;
};

void validate(const DecodingConfig& config);
json to_json(const DecodingConfig& config);
DecodingConfig decoding_config_from_json(const json& j);

/// Everything a backend needs for one single-turn call. `sample_index`
/// distinguishes repeated draws of the same prompt (best-of-n decoding); it is
/// not sent on the wire.
struct ChatRequest {
  std::string prompt;
  DecodingConfig config;
  std::string template_version;
  std::int64_t sample_index = 0;
};

std::string cache_key(const ChatRequest& request);

/// Thrown by backends for failures worth retrying.
class RetryableError : public Error {
 public:
  RetryableError(const std::string& what, bool rate_limited)
      : Error("teacher", what), rate_limited_(rate_limited) {}
  bool rate_limited() const noexcept { return rate_limited_; }

 private:
  bool rate_limited_;
};

enum class BackendKind { live_http, replay_cache, deterministic_mock };
const char* to_string(BackendKind kind);

class Backend {
 public:
  virtual ~Backend() = default;
  virtual BackendKind kind() const = 0;
  /// Returns the assistant message text. Must be safe to call concurrently.
  virtual std::string chat(const ChatRequest& request) = 0;
};

struct RetryPolicy {
  int max_attempts = 5;
  std::chrono::milliseconds initial_delay{1000};
  double multiplier = 2.0;
  double jitter = 0.25;  // delay scaled by a uniform factor in [1, 1 + jitter)
  std::function<void(std::chrono::milliseconds)> sleep;  // defaults to this_thread::sleep_for

  std::chrono::milliseconds delay_before(int attempt, std::uint64_t salt) const;
};

struct Completion {
  std::string text;
  int attempts = 1;
};

/// One call with retry. RetryableError is retried with exponential backoff;
/// every other error surfaces immediately.
Completion complete(const ChatRequest& request, Backend& backend, const RetryPolicy& policy = {});
Completion complete(std::string_view prompt, const DecodingConfig& config, Backend& backend,
                    const RetryPolicy& policy = {});

}  // namespace ik::teacher
