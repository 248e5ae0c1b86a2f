#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "instructkit/corpus_stats.hpp"

namespace ik::stats::lexicon {

bool is_verb_base(std::string_view w);
/// Irregular inflection -> base form ("wrote" -> "write").
std::optional<std::string> irregular_verb(std::string_view w);
std::optional<std::string> irregular_noun(std::string_view w);
bool is_adjective(std::string_view w);
/// Closed-class words (determiners, pronouns, prepositions, ...).
std::optional<Pos> closed_class(std::string_view w);
bool is_subject_pronoun(std::string_view w);
bool is_object_pronoun(std::string_view w);
bool is_discourse_opener(std::string_view w);

}  // namespace ik::stats::lexicon
