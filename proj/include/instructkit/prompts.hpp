#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ik::teacher {

// Versioned wording for the prompts whose text is ours to choose. The
// version strings are written into provenance and every verdict.
inline constexpr std::string_view kRatingPromptVersion = "rating-v1";
inline constexpr std::string_view kJudgePromptVersion = "judge-v1";
inline constexpr std::string_view kTranslationPromptVersion = "translate-zh-v1";
inline constexpr std::string_view kTranslationWrapper =
    "Translate the following text into Chinese, output only the translation:";

/// Presents the prompt and every candidate, asking for one 1-10 score per
/// candidate as a comma-separated list. `strict` appends the reprompt demand.
std::string render_rating_prompt(std::string_view prompt, const std::vector<std::string>& responses,
                                 bool strict = false);

std::string render_translation_prompt(std::string_view text);

/// Two-answer judge prompt: scores on the first line, explanation after.
std::string render_judge_prompt(std::string_view question, std::string_view answer_1, std::string_view answer_2,
                                bool strict = false);

/// Inverse helpers used by the mock teacher to recognise its own prompts.
std::optional<std::vector<std::string>> rating_candidates(std::string_view prompt);
std::optional<std::vector<std::string>> judge_answers(std::string_view prompt);
std::optional<std::string> translation_source(std::string_view prompt);

/// Score extraction. Picks the first line holding exactly `k` numbers
/// ("7/10" counts as 7, numbers right after "assistant"/"response"/"answer"
/// are labels, not scores). Every picked number must be an integer or a
/// one-decimal real in [1, 10]; otherwise the whole parse fails.
struct ScoreParse {
  std::optional<std::vector<double>> scores;
  std::string reason;  // why parsing failed, empty on success
};

ScoreParse parse_scores(std::string_view reply, std::size_t k);

}  // namespace ik::teacher
