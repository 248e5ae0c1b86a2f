#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "instructkit/records.hpp"
#include "instructkit/text.hpp"

namespace ik::stats {

enum class Pos { noun, verb, aux, adj, adv, det, num, pron, adp, conj, part, punct, intj, other };

const char* to_string(Pos pos);

struct TaggedToken {
  std::string word;   // lowercased surface form
  Pos pos = Pos::other;
  std::string lemma;  // lowercase lemma; equals word when no rule applies

  friend bool operator==(const TaggedToken&, const TaggedToken&) = default;
};

using Sentence = std::vector<TaggedToken>;

/// Splits a text into sentences of tagged tokens.
class Tagger {
 public:
  virtual ~Tagger() = default;
  virtual std::vector<Sentence> tag(std::string_view text) const = 0;
  /// Identifies tagger and lexicon revision; part of every export.
  virtual std::string version() const = 0;
};

/// Lexicon-driven tagger: bundled verb/adjective/function-word lists with
/// context rules for words that can be either verb or noun. Unknown words
/// are nouns.
class RuleTagger final : public Tagger {
 public:
  std::vector<Sentence> tag(std::string_view text) const override;
  std::string version() const override { return "rule-tagger-v1"; }
};

/// Adapter for text tagged upstream, as whitespace-separated `word/TAG` or
/// `word/TAG/lemma` tokens. TAG may be Penn Treebank (VBZ, NNS, ...) or
/// Universal Dependencies (VERB, NOUN, ...). Sentences end at . ! ? tokens
/// and at line breaks. Missing lemmas come from the bundled lemmatizer.
class PretaggedTagger final : public Tagger {
 public:
  std::vector<Sentence> tag(std::string_view text) const override;
  std::string version() const override { return "pretagged-v1"; }
};

Pos pos_from_tag(std::string_view tag);

// Lemmatizer: exception table first, then suffix rules. lemmatize_verb
// returns nullopt when no candidate is a known verb.
std::optional<std::string> lemmatize_verb(std::string_view word);
std::string lemmatize_noun(std::string_view word);
bool is_known_verb(std::string_view lemma);

struct VerbNoun {
  std::string verb;
  std::string noun;

  auto operator<=>(const VerbNoun&) const = default;
};

/// Root verb and its direct-object head noun in one tagged sentence: the
/// first verb (auxiliaries skipped), then the head of the first noun phrase
/// that follows it. Absent when a preposition, clause or end of sentence
/// intervenes, or when the object is a pronoun.
std::optional<VerbNoun> extract_from_sentence(const Sentence& sentence);

enum class SentenceScope { first, all };

/// First-sentence extraction (the default reading of the statistics).
std::optional<VerbNoun> extract_verb_noun(std::string_view text, const Tagger& tagger);
/// One extraction per sentence that yields a pair.
std::vector<VerbNoun> extract_all_verb_nouns(std::string_view text, const Tagger& tagger);

struct VerbNounPair {
  std::string verb;
  std::string noun;
  std::size_t frequency = 0;

  friend bool operator==(const VerbNounPair&, const VerbNounPair&) = default;
};

/// Threshold that reproduces the "frequency higher than 10" view.
inline constexpr std::size_t kDefaultMinFrequency = 11;
inline constexpr std::size_t kDefaultTopK = 25;

/// Raw tally over all responses; parallel partitions merged by addition.
std::map<VerbNoun, std::size_t> count_pairs(const std::vector<std::string>& responses, const Tagger& tagger,
                                            SentenceScope scope = SentenceScope::first, std::size_t workers = 1);

/// Pairs with frequency >= min_frequency, sorted by descending frequency,
/// then verb, then noun.
std::vector<VerbNounPair> pair_frequencies(const std::vector<std::string>& responses, const Tagger& tagger,
                                           std::size_t min_frequency, SentenceScope scope = SentenceScope::first,
                                           std::size_t workers = 1);

std::vector<VerbNounPair> sorted_pairs(const std::map<VerbNoun, std::size_t>& counts, std::size_t min_frequency);
std::vector<VerbNounPair> top_k_pairs(const std::vector<VerbNounPair>& pairs, std::size_t k);

/// verb \t noun \t frequency, with a header line.
std::string pair_table_tsv(const std::vector<VerbNounPair>& pairs);

/// Two-level hierarchy {name, value, children:[{name:verb, value, children:[{name:noun, value}]}]}
/// with verb weight = sum of its nouns. Verbs ordered by weight then name.
json sunburst_export(const std::vector<VerbNounPair>& pairs);

struct LengthHistogram {
  std::vector<std::size_t> edges;   // ascending; bin i is [edges[i], edges[i+1])
  std::vector<std::size_t> counts;  // edges.size() - 1 entries
  text::TokenUnit unit = text::TokenUnit::mixed;

  std::size_t total() const;
};

LengthHistogram length_distribution(const std::vector<std::string>& responses,
                                    text::TokenUnit unit = text::TokenUnit::mixed, std::size_t bin_width = 1);

json to_json(const LengthHistogram& h);

}  // namespace ik::stats
