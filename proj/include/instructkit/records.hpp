#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace ik {

using json = nlohmann::json;

enum class Language { en, zh };

const char* to_string(Language lang);
Language language_from_string(std::string_view s);

/// Deterministic identity of an instruction: SHA-256 over the language tag,
/// the instruction and the (possibly absent) input.
std::string canonical_id(std::string_view instruction, const std::optional<std::string>& input,
                         Language language);

/// One instruction / optional input / optional output triple. Construct via
/// `create`, which trims nothing but validates, normalises an empty input to
/// absent and computes the id.
struct InstructionInstance {
  std::string id;
  std::string instruction;
  std::optional<std::string> input;
  std::optional<std::string> output;
  Language language = Language::en;
  json extra = json::object();  // unknown fields, preserved on round trip

  static InstructionInstance create(std::string instruction, std::optional<std::string> input,
                                    std::optional<std::string> output = std::nullopt,
                                    Language language = Language::en,
                                    json extra = json::object());

  InstructionInstance with_output(std::optional<std::string> out) const;

  friend bool operator==(const InstructionInstance&, const InstructionInstance&) = default;
};

struct ResponseRecord {
  std::string instance_id;
  std::string model;
  std::int64_t decode_index = 0;
  std::string text;
  json extra = json::object();

  friend bool operator==(const ResponseRecord&, const ResponseRecord&) = default;
};

struct ScoredResponse {
  std::string text;
  std::string model;
  double score = 0.0;
  json extra = json::object();

  friend bool operator==(const ScoredResponse&, const ScoredResponse&) = default;
};

/// One prompt with K >= 2 responses, each scored in [1, 10].
struct ComparisonRecord {
  std::string prompt;
  std::vector<ScoredResponse> responses;
  std::optional<std::string> raw;  // rating reply the scores were parsed from
  json extra = json::object();

  friend bool operator==(const ComparisonRecord&, const ComparisonRecord&) = default;
};

struct TrainingPair {
  std::string prompt;
  std::string y_low;
  std::string y_high;
  double s_low = 0.0;
  double s_high = 0.0;

  friend bool operator==(const TrainingPair&, const TrainingPair&) = default;
};

inline constexpr double kMinScore = 1.0;
inline constexpr double kMaxScore = 10.0;

bool score_in_range(double s);

/// Integral values serialise as JSON integers (7, not 7.0).
json number_json(double v);

// Invariant checks. Each throws ValidationError naming the violated rule.
void validate(const InstructionInstance& r);
void validate(const ResponseRecord& r);
void validate(const ComparisonRecord& r);
void validate(const TrainingPair& r);

json to_json(const InstructionInstance& r);
json to_json(const ResponseRecord& r);
json to_json(const ComparisonRecord& r);

InstructionInstance instance_from_json(const json& j);
ResponseRecord response_from_json(const json& j);
ComparisonRecord comparison_from_json(const json& j);

/// Accepts the public benchmark layouts: flat {instruction,input,output},
/// {instruction, instances:[{input,output}]} (user-oriented / unnatural core,
/// one record per instance) and {question_id, text, category} (80-question set).
std::vector<InstructionInstance> benchmark_from_json(const json& j);

/// Instruction text as shown to a judge or annotator: instruction, plus the
/// input on following lines when present.
std::string question_text(const InstructionInstance& r);

}  // namespace ik
