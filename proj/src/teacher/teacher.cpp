#include "instructkit/teacher.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <thread>

#include "instructkit/hashing.hpp"

namespace ik::teacher {

namespace {

std::size_t count_occurrences(std::string_view hay, std::string_view needle) {
  std::size_t n = 0;
  for (std::size_t pos = hay.find(needle); pos != std::string_view::npos; pos = hay.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

// Scans the template once; substituted values are never rescanned.
std::string substitute(std::string_view body, std::string_view instruction, const std::string* input) {
  static constexpr std::string_view kInstruction = "{instruction}";
  static constexpr std::string_view kInput = "{input}";
  std::string out;
  out.reserve(body.size() + instruction.size() + (input ? input->size() : 0));
  std::size_t i = 0;
  while (i < body.size()) {
    if (body.substr(i, kInstruction.size()) == kInstruction) {
      out.append(instruction);
      i += kInstruction.size();
    } else if (input && body.substr(i, kInput.size()) == kInput) {
      out.append(*input);
      i += kInput.size();
    } else {
      out.push_back(body[i++]);
    }
  }
  return out;
}

std::string fmt_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

TemplateSet TemplateSet::alpaca() {
  return TemplateSet{
      "Below is an instruction that describes a task, paired with an input that provides further context. "
      "Write a response that appropriately completes the request.\n\n"
      "### Instruction:\n{instruction}\n\n### Input:\n{input}\n\n### Response:",
      "Below is an instruction that describes a task. "
      "Write a response that appropriately completes the request.\n\n"
      "### Instruction:\n{instruction}\n\n### Response:",
  };
}

TemplateSet TemplateSet::from_json(const json& j) {
  if (!j.is_object() || !j.contains("prompt_input") || !j.contains("prompt_no_input") ||
      !j["prompt_input"].is_string() || !j["prompt_no_input"].is_string()) {
    throw SchemaError("teacher", "template file needs string fields 'prompt_input' and 'prompt_no_input'");
  }
  TemplateSet t{j["prompt_input"].get<std::string>(), j["prompt_no_input"].get<std::string>()};
  validate(t);
  return t;
}

std::string TemplateSet::version() const {
  return sha256_fields({"templates", prompt_input, prompt_no_input}).substr(0, 16);
}

void validate(const TemplateSet& t) {
  if (count_occurrences(t.prompt_input, "{instruction}") != 1 || count_occurrences(t.prompt_input, "{input}") != 1) {
    throw ValidationError("teacher", "prompt_input must contain {instruction} and {input} exactly once each");
  }
  if (count_occurrences(t.prompt_no_input, "{instruction}") != 1 ||
      count_occurrences(t.prompt_no_input, "{input}") != 0) {
    throw ValidationError("teacher", "prompt_no_input must contain {instruction} exactly once and no {input}");
  }
}

std::string render_prompt(const InstructionInstance& instance, const TemplateSet& templates) {
  if (instance.input) return substitute(templates.prompt_input, instance.instruction, &*instance.input);
  return substitute(templates.prompt_no_input, instance.instruction, nullptr);
}

void validate(const DecodingConfig& c) {
  if (c.model.empty()) throw ValidationError("teacher", "model must be non-empty");
  if (!(c.temperature >= 0.0) || !std::isfinite(c.temperature)) {
    throw ValidationError("teacher", "temperature must be >= 0");
  }
  if (!(c.top_p > 0.0 && c.top_p <= 1.0)) throw ValidationError("teacher", "top_p must lie in (0, 1]");
  if (c.max_tokens <= 0) throw ValidationError("teacher", "max_tokens must be positive");
}

json to_json(const DecodingConfig& c) {
  return json{{"model", c.model}, {"temperature", c.temperature}, {"top_p", c.top_p}, {"max_tokens", c.max_tokens}};
}

DecodingConfig decoding_config_from_json(const json& j) {
  DecodingConfig c;
  if (!j.is_object()) throw SchemaError("teacher", "decoding config must be an object");
  if (j.contains("model")) c.model = j["model"].get<std::string>();
  if (j.contains("temperature")) c.temperature = j["temperature"].get<double>();
  if (j.contains("top_p")) c.top_p = j["top_p"].get<double>();
  if (j.contains("max_tokens")) c.max_tokens = j["max_tokens"].get<std::int64_t>();
  validate(c);
  return c;
}

std::string cache_key(const ChatRequest& r) {
  const std::string temperature = fmt_real(r.config.temperature);
  const std::string top_p = fmt_real(r.config.top_p);
  const std::string max_tokens = std::to_string(r.config.max_tokens);
  if (r.sample_index == 0) {
    return sha256_fields({r.template_version, r.prompt, r.config.model, temperature, top_p, max_tokens});
  }
  const std::string sample = std::to_string(r.sample_index);
  return sha256_fields({r.template_version, r.prompt, r.config.model, temperature, top_p, max_tokens, sample});
}

const char* to_string(BackendKind kind) {
  switch (kind) {
    case BackendKind::live_http: return "live";
    case BackendKind::replay_cache: return "replay";
    case BackendKind::deterministic_mock: return "mock";
  }
  return "mock";
}

std::chrono::milliseconds RetryPolicy::delay_before(int attempt, std::uint64_t salt) const {
  // attempt is the 1-based number of the attempt that just failed
  const double base = static_cast<double>(initial_delay.count()) * std::pow(multiplier, attempt - 1);
  std::mt19937_64 rng(salt ^ static_cast<std::uint64_t>(attempt));
  const double factor = 1.0 + std::uniform_real_distribution<double>(0.0, std::max(0.0, jitter))(rng);
  return std::chrono::milliseconds(static_cast<std::int64_t>(std::llround(base * factor)));
}

Completion complete(const ChatRequest& request, Backend& backend, const RetryPolicy& policy) {
  const int max_attempts = std::max(1, policy.max_attempts);
  const std::uint64_t salt = hash64(request.prompt, static_cast<std::uint64_t>(request.sample_index));
  std::string last_error;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    try {
      return Completion{backend.chat(request), attempt};
    } catch (const RetryableError& e) {
      last_error = e.what();
      if (attempt == max_attempts) break;
      const auto delay = policy.delay_before(attempt, salt);
      if (policy.sleep) {
        policy.sleep(delay);
      } else {
        std::this_thread::sleep_for(delay);
      }
    }
  }
  throw TransportError("teacher call failed after " + std::to_string(max_attempts) + " attempts: " + last_error,
                       max_attempts);
}

Completion complete(std::string_view prompt, const DecodingConfig& config, Backend& backend,
                    const RetryPolicy& policy) {
  ChatRequest r{std::string(prompt), config, TemplateSet::alpaca().version(), 0};
  return complete(r, backend, policy);
}

}  // namespace ik::teacher
