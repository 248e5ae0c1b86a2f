#include "instructkit/records.hpp"

#include <cmath>
#include <set>
#include <tuple>

#include "instructkit/error.hpp"
#include "instructkit/hashing.hpp"
#include "instructkit/text.hpp"

namespace ik {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw ValidationError("core", what); }

const json& require(const json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end()) throw SchemaError("core", std::string("missing required field '") + field + "'");
  return *it;
}

std::string require_string(const json& j, const char* field) {
  const json& v = require(j, field);
  if (!v.is_string()) throw SchemaError("core", std::string("field '") + field + "' must be a string");
  return v.get<std::string>();
}

std::optional<std::string> optional_string(const json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw SchemaError("core", std::string("field '") + field + "' must be a string");
  return it->get<std::string>();
}

double require_number(const json& j, const char* field) {
  const json& v = require(j, field);
  if (!v.is_number()) throw SchemaError("core", std::string("field '") + field + "' must be a number");
  return v.get<double>();
}

json extras(const json& j, std::initializer_list<const char*> known) {
  json out = json::object();
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool is_known = false;
    for (const char* k : known) is_known = is_known || it.key() == k;
    if (!is_known) out[it.key()] = it.value();
  }
  return out;
}

void merge_extras(json& out, const json& extra) {
  for (auto it = extra.begin(); it != extra.end(); ++it) {
    if (!out.contains(it.key())) out[it.key()] = it.value();
  }
}

void require_object(const json& j) {
  if (!j.is_object()) throw SchemaError("core", "record must be a JSON object");
}

}  // namespace

json number_json(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 1e15) return static_cast<std::int64_t>(v);
  return v;
}

const char* to_string(Language lang) { return lang == Language::zh ? "zh" : "en"; }

Language language_from_string(std::string_view s) {
  if (s == "en") return Language::en;
  if (s == "zh") return Language::zh;
  throw ValidationError("core", "language must be one of {en, zh}, got '" + std::string(s) + "'");
}

std::string canonical_id(std::string_view instruction, const std::optional<std::string>& input,
                         Language language) {
  if (text::trim(instruction).empty()) invalid("instruction must be non-empty after trimming");
  // The presence flag keeps "absent" distinct from any input string.
  return sha256_fields({"instructkit/v1", to_string(language), instruction, input ? "1" : "0",
                        input ? std::string_view(*input) : std::string_view()});
}

InstructionInstance InstructionInstance::create(std::string instruction, std::optional<std::string> input,
                                                std::optional<std::string> output, Language language,
                                                json extra) {
  if (input && input->empty()) input.reset();
  InstructionInstance r;
  r.id = canonical_id(instruction, input, language);
  r.instruction = std::move(instruction);
  r.input = std::move(input);
  r.output = std::move(output);
  r.language = language;
  r.extra = extra.is_object() ? std::move(extra) : json::object();
  return r;
}

InstructionInstance InstructionInstance::with_output(std::optional<std::string> out) const {
  InstructionInstance copy = *this;
  copy.output = std::move(out);
  return copy;
}

bool score_in_range(double s) { return std::isfinite(s) && s >= kMinScore && s <= kMaxScore; }

void validate(const InstructionInstance& r) {
  if (text::trim(r.instruction).empty()) invalid("instruction must be non-empty after trimming");
  if (r.input && r.input->empty()) invalid("input, when present, must be non-empty");
  if (r.id != canonical_id(r.instruction, r.input, r.language)) invalid("id does not match content");
}

void validate(const ResponseRecord& r) {
  if (r.instance_id.empty()) invalid("instance_id must be non-empty");
  if (r.decode_index < 0) invalid("decode_index must be >= 0");
}

void validate(const ComparisonRecord& r) {
  if (r.responses.size() < 2) invalid("comparison record needs K >= 2 responses");
  for (const auto& resp : r.responses) {
    if (!score_in_range(resp.score)) {
      invalid("score " + std::to_string(resp.score) + " violates score ∈ [1,10]");
    }
  }
}

void validate(const TrainingPair& r) {
  if (!(r.s_low < r.s_high)) invalid("training pair requires s_low < s_high");
}

json to_json(const InstructionInstance& r) {
  json j = json::object();
  j["id"] = r.id;
  j["instruction"] = r.instruction;
  if (r.input) j["input"] = *r.input;
  if (r.output) j["output"] = *r.output;
  j["language"] = to_string(r.language);
  merge_extras(j, r.extra);
  return j;
}

json to_json(const ResponseRecord& r) {
  json j = json::object();
  j["instance_id"] = r.instance_id;
  j["model"] = r.model;
  j["decode_index"] = r.decode_index;
  j["text"] = r.text;
  merge_extras(j, r.extra);
  return j;
}

json to_json(const ComparisonRecord& r) {
  json j = json::object();
  j["prompt"] = r.prompt;
  json arr = json::array();
  for (const auto& resp : r.responses) {
    json e = json::object();
    e["text"] = resp.text;
    e["model"] = resp.model;
    e["score"] = number_json(resp.score);
    merge_extras(e, resp.extra);
    arr.push_back(std::move(e));
  }
  j["responses"] = std::move(arr);
  if (r.raw) j["raw"] = *r.raw;
  merge_extras(j, r.extra);
  return j;
}

InstructionInstance instance_from_json(const json& j) {
  require_object(j);
  const auto lang = j.contains("language") && !j["language"].is_null()
                        ? language_from_string(require_string(j, "language"))
                        : Language::en;
  json extra = extras(j, {"id", "instruction", "input", "output", "language"});
  auto r = InstructionInstance::create(require_string(j, "instruction"), optional_string(j, "input"),
                                       optional_string(j, "output"), lang, std::move(extra));
  // A foreign id (e.g. from a benchmark) is kept rather than dropped.
  if (auto stored = optional_string(j, "id"); stored && *stored != r.id) r.extra["source_id"] = *stored;
  validate(r);
  return r;
}

ResponseRecord response_from_json(const json& j) {
  require_object(j);
  ResponseRecord r;
  r.instance_id = require_string(j, "instance_id");
  r.model = require_string(j, "model");
  const json& idx = require(j, "decode_index");
  if (!idx.is_number_integer()) throw SchemaError("core", "field 'decode_index' must be an integer");
  r.decode_index = idx.get<std::int64_t>();
  r.text = require_string(j, "text");
  r.extra = extras(j, {"instance_id", "model", "decode_index", "text"});
  validate(r);
  return r;
}

ComparisonRecord comparison_from_json(const json& j) {
  require_object(j);
  ComparisonRecord r;
  r.prompt = require_string(j, "prompt");
  const json& arr = require(j, "responses");
  if (!arr.is_array()) throw SchemaError("core", "field 'responses' must be an array");
  for (const json& e : arr) {
    require_object(e);
    ScoredResponse s;
    s.text = require_string(e, "text");
    s.model = require_string(e, "model");
    s.score = require_number(e, "score");
    s.extra = extras(e, {"text", "model", "score"});
    r.responses.push_back(std::move(s));
  }
  r.raw = optional_string(j, "raw");
  r.extra = extras(j, {"prompt", "responses", "raw"});
  validate(r);
  return r;
}

std::vector<InstructionInstance> benchmark_from_json(const json& j) {
  require_object(j);
  const auto lang = j.contains("language") ? language_from_string(require_string(j, "language")) : Language::en;
  std::vector<InstructionInstance> out;
  if (j.contains("instances") && j["instances"].is_array()) {
    const std::string instruction = require_string(j, "instruction");
    json base = extras(j, {"instruction", "instances", "language"});
    std::size_t k = 0;
    for (const json& inst : j["instances"]) {
      require_object(inst);
      json extra = base;
      for (auto it = inst.begin(); it != inst.end(); ++it) {
        if (it.key() != "input" && it.key() != "output") extra[it.key()] = it.value();
      }
      if (j["instances"].size() > 1) extra["instance_index"] = k;
      out.push_back(InstructionInstance::create(instruction, optional_string(inst, "input"),
                                                optional_string(inst, "output"), lang, std::move(extra)));
      ++k;
    }
    if (out.empty()) throw SchemaError("core", "benchmark record has an empty 'instances' list");
    return out;
  }
  if (j.contains("question_id") && j.contains("text")) {
    json extra = extras(j, {"text", "language"});
    out.push_back(InstructionInstance::create(require_string(j, "text"), std::nullopt, std::nullopt, lang,
                                              std::move(extra)));
    return out;
  }
  out.push_back(instance_from_json(j));
  return out;
}

std::string question_text(const InstructionInstance& r) {
  if (!r.input) return r.instruction;
  return r.instruction + "\n\n" + *r.input;
}

}  // namespace ik
