#include "instructkit/corpus_stats.hpp"

#include <algorithm>
#include <cctype>

#include "instructkit/error.hpp"
#include "instructkit/parallel.hpp"
#include "lexicon.hpp"

namespace ik::stats {

namespace lx = lexicon;

const char* to_string(Pos pos) {
  switch (pos) {
    case Pos::noun: return "NOUN";
    case Pos::verb: return "VERB";
    case Pos::aux: return "AUX";
    case Pos::adj: return "ADJ";
    case Pos::adv: return "ADV";
    case Pos::det: return "DET";
    case Pos::num: return "NUM";
    case Pos::pron: return "PRON";
    case Pos::adp: return "ADP";
    case Pos::conj: return "CONJ";
    case Pos::part: return "PART";
    case Pos::punct: return "PUNCT";
    case Pos::intj: return "INTJ";
    case Pos::other: return "X";
  }
  return "X";
}

// ---------------------------------------------------------------------------
// Lemmatizer

namespace {

bool ends_with(std::string_view w, std::string_view suffix) {
  return w.size() >= suffix.size() && w.substr(w.size() - suffix.size()) == suffix;
}

std::string drop(std::string_view w, std::size_t n) { return std::string(w.substr(0, w.size() - n)); }

}  // namespace

bool is_known_verb(std::string_view lemma) { return lx::is_verb_base(lemma); }

std::optional<std::string> lemmatize_verb(std::string_view w) {
  if (auto irr = lx::irregular_verb(w)) return irr;
  if (lx::is_verb_base(w)) return std::string(w);
  std::vector<std::string> candidates;
  if (ends_with(w, "ies") && w.size() > 4) candidates.push_back(drop(w, 3) + "y");
  if (ends_with(w, "es")) candidates.push_back(drop(w, 2));
  if (ends_with(w, "s") && !ends_with(w, "ss")) candidates.push_back(drop(w, 1));
  if (ends_with(w, "ied") && w.size() > 4) candidates.push_back(drop(w, 3) + "y");
  if (ends_with(w, "ed")) {
    candidates.push_back(drop(w, 1));  // created -> create
    candidates.push_back(drop(w, 2));  // listed -> list
    if (w.size() > 4 && w[w.size() - 3] == w[w.size() - 4]) candidates.push_back(drop(w, 3));  // planned
  }
  if (ends_with(w, "ing") && w.size() > 4) {
    candidates.push_back(drop(w, 3));        // listing -> list
    candidates.push_back(drop(w, 3) + "e");  // writing -> write
    if (w.size() > 5 && w[w.size() - 4] == w[w.size() - 5]) candidates.push_back(drop(w, 4));  // planning
  }
  for (const auto& c : candidates) {
    if (lx::is_verb_base(c)) return c;
  }
  return std::nullopt;
}

std::string lemmatize_noun(std::string_view w) {
  if (auto irr = lx::irregular_noun(w)) return *irr;
  if (w.size() <= 3) return std::string(w);
  if (ends_with(w, "ss") || ends_with(w, "us") || ends_with(w, "is") || ends_with(w, "ics")) return std::string(w);
  if (ends_with(w, "ies") && w.size() > 4) return drop(w, 3) + "y";
  if (ends_with(w, "sses") || ends_with(w, "xes") || ends_with(w, "zes") || ends_with(w, "ches") ||
      ends_with(w, "shes")) {
    return drop(w, 2);
  }
  if (ends_with(w, "s") && !ends_with(w, "'s")) return drop(w, 1);
  return std::string(w);
}

// ---------------------------------------------------------------------------
// Rule tagger

namespace {

bool is_word_char(char32_t cp) {
  return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9') || cp >= 0x80;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  const auto cps = text::decode_utf8(text);
  std::vector<char32_t> cur;
  auto flush = [&] {
    std::string s = text::trim(text::encode_utf8(cur));
    if (!s.empty()) out.push_back(std::move(s));
    cur.clear();
  };
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const char32_t cp = cps[i];
    if (cp == '\n') {
      flush();
      continue;
    }
    cur.push_back(cp);
    const bool terminal = cp == '.' || cp == '!' || cp == '?' || cp == 0x3002 || cp == 0xFF01 || cp == 0xFF1F;
    if (terminal && (i + 1 == cps.size() || text::is_space(cps[i + 1]) || cp >= 0x80)) flush();
  }
  flush();
  return out;
}

std::vector<std::string> word_tokens(std::string_view sentence) {
  std::vector<std::string> out;
  std::vector<char32_t> cur;
  auto flush = [&] {
    if (cur.empty()) return;
    // trailing apostrophes/hyphens are punctuation
    while (!cur.empty() && (cur.back() == '\'' || cur.back() == '-')) cur.pop_back();
    std::string w = text::to_lower_ascii(text::encode_utf8(cur));
    cur.clear();
    if (w.empty()) return;
    if (ends_with(w, "'s") && !lx::closed_class(w)) w = drop(w, 2);
    out.push_back(std::move(w));
  };
  const auto cps = text::decode_utf8(sentence);
  for (std::size_t i = 0; i < cps.size(); ++i) {
    char32_t cp = cps[i];
    if (cp == 0x2019) cp = '\'';
    const bool inner = (cp == '\'' || cp == '-') && !cur.empty() && i + 1 < cps.size() && is_word_char(cps[i + 1]);
    if (is_word_char(cp) || inner) {
      cur.push_back(cp);
    } else {
      flush();
      if (!text::is_space(cp)) out.push_back(text::encode_utf8(cp));
    }
  }
  flush();
  return out;
}

bool is_number_word(std::string_view w) {
  static constexpr std::string_view kNumbers[] = {
      "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "eleven", "twelve", "fifteen",
      "twenty", "thirty", "fifty", "hundred", "thousand", "million", "billion", "dozen"};
  if (std::all_of(w.begin(), w.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == ','; }) &&
      std::any_of(w.begin(), w.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    return true;
  }
  return std::find(std::begin(kNumbers), std::end(kNumbers), w) != std::end(kNumbers);
}

bool looks_like_participle(std::string_view w) {
  if (auto irr = lx::irregular_verb(w)) return *irr != w;
  return (ends_with(w, "ed") || ends_with(w, "en")) && lemmatize_verb(w).has_value();
}

Pos tag_word(const std::vector<std::string>& words, std::size_t i, const std::vector<TaggedToken>& done,
             bool first_content) {
  const std::string& w = words[i];
  const std::string* next = i + 1 < words.size() ? &words[i + 1] : nullptr;
  const bool alpha = std::any_of(w.begin(), w.end(), [](char c) { return std::isalpha(static_cast<unsigned char>(c)); }) ||
                     static_cast<unsigned char>(w[0]) >= 0x80;
  if (!alpha && !std::isdigit(static_cast<unsigned char>(w[0]))) return Pos::punct;
  if (is_number_word(w)) return Pos::num;
  if (std::any_of(w.begin(), w.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    return Pos::adj;  // "500-word", "3d"
  }
  if (w == "have" || w == "has" || w == "had") {
    return next && looks_like_participle(*next) ? Pos::aux : Pos::verb;
  }
  if (w == "do" || w == "does" || w == "did") {
    if (next && (lx::is_subject_pronoun(*next) || *next == "not")) return Pos::aux;
    if (next && lemmatize_verb(*next) && !first_content) return Pos::aux;
    return Pos::verb;
  }
  if (auto closed = lx::closed_class(w)) return *closed;

  const TaggedToken* prev = done.empty() ? nullptr : &done.back();
  if (auto lemma = lemmatize_verb(w)) {
    const bool inflected = *lemma != w;
    if (first_content) return Pos::verb;
    if (!prev) return Pos::verb;
    switch (prev->pos) {
      case Pos::pron:
        return lx::is_subject_pronoun(prev->word) ? Pos::verb : Pos::noun;
      case Pos::aux:
        return Pos::verb;
      case Pos::adp:
        return prev->word == "to" && !inflected ? Pos::verb : Pos::noun;
      case Pos::det:
      case Pos::adj:
      case Pos::num:
        return Pos::noun;
      case Pos::noun:
        if (inflected && !ends_with(w, "ing")) return Pos::verb;
        // reduced relative: "a sentence using the word"
        if (ends_with(w, "ing") && next && lx::closed_class(*next) == Pos::det) return Pos::verb;
        return ends_with(prev->word, "s") && prev->lemma != prev->word ? Pos::verb : Pos::noun;
      case Pos::verb:
        return ends_with(w, "ing") ? Pos::verb : Pos::noun;
      case Pos::conj:
        // coordinated imperatives: "Write and edit a story"
        for (auto it = done.rbegin(); it != done.rend(); ++it) {
          if (it->pos == Pos::verb) return Pos::verb;
          if (it->pos == Pos::noun) return Pos::noun;
        }
        return Pos::verb;
      default:
        return Pos::verb;
    }
  }
  if (lx::is_adjective(w)) return Pos::adj;
  if (w.size() > 4 && ends_with(w, "ly")) return Pos::adv;
  return Pos::noun;
}

std::string lemma_for(const std::string& w, Pos pos) {
  switch (pos) {
    case Pos::verb:
    case Pos::aux:
      if (auto l = lemmatize_verb(w)) return *l;
      return w;
    case Pos::noun:
      return lemmatize_noun(w);
    default:
      return w;
  }
}

}  // namespace

std::vector<Sentence> RuleTagger::tag(std::string_view text) const {
  std::vector<Sentence> out;
  for (const auto& s : split_sentences(text)) {
    const auto words = word_tokens(s);
    Sentence sent;
    bool seen_content = false;
    for (std::size_t i = 0; i < words.size(); ++i) {
      Pos pos = tag_word(words, i, sent, !seen_content);
      // discourse openers ("Sure," "Please") do not count as content
      if (pos != Pos::punct && pos != Pos::intj && !(pos == Pos::adv && lx::is_discourse_opener(words[i]))) {
        seen_content = true;
      }
      sent.push_back(TaggedToken{words[i], pos, lemma_for(words[i], pos)});
    }
    if (!sent.empty()) out.push_back(std::move(sent));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pre-tagged adapter

Pos pos_from_tag(std::string_view t) {
  static const std::pair<std::string_view, Pos> kTags[] = {
      // Universal Dependencies
      {"VERB", Pos::verb}, {"AUX", Pos::aux}, {"NOUN", Pos::noun}, {"PROPN", Pos::noun}, {"PRON", Pos::pron},
      {"DET", Pos::det}, {"ADJ", Pos::adj}, {"ADV", Pos::adv}, {"ADP", Pos::adp}, {"CCONJ", Pos::conj},
      {"SCONJ", Pos::conj}, {"CONJ", Pos::conj}, {"NUM", Pos::num}, {"PART", Pos::part}, {"PUNCT", Pos::punct},
      {"SYM", Pos::punct}, {"INTJ", Pos::intj}, {"X", Pos::other},
      // Penn Treebank
      {"VB", Pos::verb}, {"VBD", Pos::verb}, {"VBG", Pos::verb}, {"VBN", Pos::verb}, {"VBP", Pos::verb},
      {"VBZ", Pos::verb}, {"MD", Pos::aux}, {"NN", Pos::noun}, {"NNS", Pos::noun}, {"NNP", Pos::noun},
      {"NNPS", Pos::noun}, {"PRP", Pos::pron}, {"WP", Pos::pron}, {"EX", Pos::pron}, {"PRP$", Pos::det},
      {"WP$", Pos::det}, {"DT", Pos::det}, {"PDT", Pos::det}, {"WDT", Pos::det}, {"JJ", Pos::adj},
      {"JJR", Pos::adj}, {"JJS", Pos::adj}, {"RB", Pos::adv}, {"RBR", Pos::adv}, {"RBS", Pos::adv},
      {"WRB", Pos::adv}, {"IN", Pos::adp}, {"TO", Pos::adp}, {"CC", Pos::conj}, {"CD", Pos::num},
      {"RP", Pos::part}, {"UH", Pos::intj}, {".", Pos::punct}, {",", Pos::punct}, {":", Pos::punct},
      {"``", Pos::punct}, {"''", Pos::punct}, {"-LRB-", Pos::punct}, {"-RRB-", Pos::punct}, {"#", Pos::punct},
      {"$", Pos::punct}, {"HYPH", Pos::punct}, {"FW", Pos::other}, {"LS", Pos::other}, {"POS", Pos::part}};
  for (const auto& [name, pos] : kTags) {
    if (name == t) return pos;
  }
  return Pos::other;
}

namespace {

bool is_known_tag(std::string_view t) { return pos_from_tag(t) != Pos::other || t == "X" || t == "FW" || t == "LS"; }

}  // namespace

std::vector<Sentence> PretaggedTagger::tag(std::string_view text) const {
  std::vector<Sentence> out;
  Sentence cur;
  auto flush = [&] {
    if (cur.empty()) return;
    // be is always auxiliary; have/do are auxiliary when a verb follows closely
    for (std::size_t i = 0; i < cur.size(); ++i) {
      auto& t = cur[i];
      if (t.pos != Pos::verb) continue;
      if (t.lemma == "be") {
        t.pos = Pos::aux;
      } else if (t.lemma == "have" || t.lemma == "do") {
        for (std::size_t j = i + 1; j < cur.size() && j <= i + 3; ++j) {
          if (cur[j].pos == Pos::verb) {
            t.pos = Pos::aux;
            break;
          }
          if (cur[j].pos != Pos::adv && cur[j].pos != Pos::pron) break;
        }
      }
    }
    out.push_back(std::move(cur));
    cur.clear();
  };
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string_view line = text.substr(pos, nl - pos);
    for (const auto& tok : text::tokenize(line, text::TokenUnit::whitespace)) {
      std::vector<std::string> parts;
      std::size_t start = 0;
      for (std::size_t k = 0; k <= tok.size(); ++k) {
        if (k == tok.size() || tok[k] == '/') {
          parts.push_back(tok.substr(start, k - start));
          start = k + 1;
        }
      }
      TaggedToken t;
      std::string tag;
      if (parts.size() >= 3 && is_known_tag(parts[parts.size() - 2])) {
        tag = parts[parts.size() - 2];
        t.lemma = text::to_lower_ascii(parts.back());
        parts.resize(parts.size() - 2);
      } else if (parts.size() >= 2) {
        tag = parts.back();
        parts.pop_back();
      }
      std::string word;
      for (std::size_t k = 0; k < parts.size(); ++k) word += (k ? "/" : "") + parts[k];
      t.word = text::to_lower_ascii(word);
      t.pos = pos_from_tag(tag);
      if (t.lemma.empty()) t.lemma = lemma_for(t.word, t.pos);
      cur.push_back(t);
      if (t.pos == Pos::punct && (t.word == "." || t.word == "!" || t.word == "?")) flush();
    }
    flush();
    pos = nl + 1;
  }
  flush();
  return out;
}

// ---------------------------------------------------------------------------
// Extraction

namespace {

bool is_copula(std::string_view w) {
  return w == "is" || w == "are" || w == "was" || w == "were" || w == "am" || w == "be" || w == "'s";
}

}  // namespace

std::optional<VerbNoun> extract_from_sentence(const Sentence& s) {
  std::size_t root = s.size();
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i].pos == Pos::aux && is_copula(s[i].word)) {
      std::size_t j = i + 1;
      while (j < s.size() && (s[j].pos == Pos::adv || s[j].pos == Pos::part)) ++j;
      if (j == s.size() || s[j].pos != Pos::verb) return std::nullopt;  // copular root
    }
    if (s[i].pos == Pos::verb) {
      root = i;
      break;
    }
  }
  if (root == s.size()) return std::nullopt;

  std::size_t i = root + 1;
  while (i < s.size() && (s[i].pos == Pos::adv || s[i].pos == Pos::part)) ++i;
  auto starts_np = [&](std::size_t k) {
    return k < s.size() && (s[k].pos == Pos::det || s[k].pos == Pos::num || s[k].pos == Pos::adj ||
                            s[k].pos == Pos::noun);
  };
  // indirect object: "Give me three tips"
  if (i < s.size() && s[i].pos == Pos::pron && lx::is_object_pronoun(s[i].word) && starts_np(i + 1)) ++i;
  if (!starts_np(i)) return std::nullopt;

  while (i < s.size() && (s[i].pos == Pos::det || s[i].pos == Pos::num || s[i].pos == Pos::adj ||
                          s[i].pos == Pos::adv || (s[i].pos == Pos::punct && s[i].word == ","))) {
    ++i;
  }
  std::optional<std::size_t> head;
  while (i < s.size() && s[i].pos == Pos::noun) head = i++;
  if (!head) return std::nullopt;
  return VerbNoun{s[root].lemma, s[*head].lemma};
}

std::optional<VerbNoun> extract_verb_noun(std::string_view text, const Tagger& tagger) {
  const auto sentences = tagger.tag(text);
  if (sentences.empty()) return std::nullopt;
  return extract_from_sentence(sentences.front());
}

std::vector<VerbNoun> extract_all_verb_nouns(std::string_view text, const Tagger& tagger) {
  std::vector<VerbNoun> out;
  for (const auto& s : tagger.tag(text)) {
    if (auto vn = extract_from_sentence(s)) out.push_back(std::move(*vn));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Frequencies

std::map<VerbNoun, std::size_t> count_pairs(const std::vector<std::string>& responses, const Tagger& tagger,
                                            SentenceScope scope, std::size_t workers) {
  workers = std::max<std::size_t>(1, std::min(workers, responses.size()));
  std::vector<std::map<VerbNoun, std::size_t>> partial(workers);
  const std::size_t chunk = responses.empty() ? 0 : (responses.size() + workers - 1) / workers;
  parallel_for(workers, workers, [&](std::size_t w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(responses.size(), begin + chunk);
    for (std::size_t i = begin; i < end; ++i) {
      if (scope == SentenceScope::first) {
        if (auto vn = extract_verb_noun(responses[i], tagger)) ++partial[w][*vn];
      } else {
        for (auto& vn : extract_all_verb_nouns(responses[i], tagger)) ++partial[w][vn];
      }
    }
  });
  std::map<VerbNoun, std::size_t> merged;
  for (const auto& m : partial) {
    for (const auto& [k, v] : m) merged[k] += v;
  }
  return merged;
}

std::vector<VerbNounPair> sorted_pairs(const std::map<VerbNoun, std::size_t>& counts, std::size_t min_frequency) {
  if (min_frequency < 1) throw ValidationError("stats", "min_frequency must be >= 1");
  std::vector<VerbNounPair> out;
  for (const auto& [vn, n] : counts) {
    if (n >= min_frequency) out.push_back({vn.verb, vn.noun, n});
  }
  std::sort(out.begin(), out.end(), [](const VerbNounPair& a, const VerbNounPair& b) {
    if (a.frequency != b.frequency) return a.frequency > b.frequency;
    if (a.verb != b.verb) return a.verb < b.verb;
    return a.noun < b.noun;
  });
  return out;
}

std::vector<VerbNounPair> pair_frequencies(const std::vector<std::string>& responses, const Tagger& tagger,
                                           std::size_t min_frequency, SentenceScope scope, std::size_t workers) {
  if (min_frequency < 1) throw ValidationError("stats", "min_frequency must be >= 1");
  return sorted_pairs(count_pairs(responses, tagger, scope, workers), min_frequency);
}

std::vector<VerbNounPair> top_k_pairs(const std::vector<VerbNounPair>& pairs, std::size_t k) {
  if (k < 1) throw ValidationError("stats", "k must be >= 1");
  std::vector<VerbNounPair> sorted = pairs;
  std::stable_sort(sorted.begin(), sorted.end(), [](const VerbNounPair& a, const VerbNounPair& b) {
    if (a.frequency != b.frequency) return a.frequency > b.frequency;
    if (a.verb != b.verb) return a.verb < b.verb;
    return a.noun < b.noun;
  });
  if (sorted.size() > k) sorted.resize(k);
  return sorted;
}

std::string pair_table_tsv(const std::vector<VerbNounPair>& pairs) {
  std::string out = "verb\tnoun\tfrequency\n";
  for (const auto& p : pairs) out += p.verb + "\t" + p.noun + "\t" + std::to_string(p.frequency) + "\n";
  return out;
}

json sunburst_export(const std::vector<VerbNounPair>& pairs) {
  std::map<std::string, std::vector<const VerbNounPair*>> by_verb;
  for (const auto& p : pairs) by_verb[p.verb].push_back(&p);
  struct VerbNode {
    std::string verb;
    std::size_t weight;
    json node;
  };
  std::vector<VerbNode> nodes;
  std::size_t total = 0;
  for (auto& [verb, children] : by_verb) {
    std::sort(children.begin(), children.end(), [](const VerbNounPair* a, const VerbNounPair* b) {
      if (a->frequency != b->frequency) return a->frequency > b->frequency;
      return a->noun < b->noun;
    });
    json kids = json::array();
    std::size_t weight = 0;
    for (const auto* c : children) {
      kids.push_back(json{{"name", c->noun}, {"value", c->frequency}});
      weight += c->frequency;
    }
    total += weight;
    nodes.push_back({verb, weight, json{{"name", verb}, {"value", weight}, {"children", std::move(kids)}}});
  }
  std::sort(nodes.begin(), nodes.end(), [](const VerbNode& a, const VerbNode& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.verb < b.verb;
  });
  json children = json::array();
  for (auto& n : nodes) children.push_back(std::move(n.node));
  return json{{"name", "root"}, {"value", total}, {"children", std::move(children)}};
}

std::size_t LengthHistogram::total() const {
  std::size_t t = 0;
  for (auto c : counts) t += c;
  return t;
}

LengthHistogram length_distribution(const std::vector<std::string>& responses, text::TokenUnit unit,
                                    std::size_t bin_width) {
  if (bin_width < 1) throw ValidationError("stats", "bin width must be >= 1");
  std::vector<std::size_t> lengths;
  lengths.reserve(responses.size());
  std::size_t max_len = 0;
  for (const auto& r : responses) {
    lengths.push_back(text::count_tokens(r, unit));
    max_len = std::max(max_len, lengths.back());
  }
  LengthHistogram h;
  h.unit = unit;
  const std::size_t bins = max_len / bin_width + 1;
  for (std::size_t b = 0; b <= bins; ++b) h.edges.push_back(b * bin_width);
  h.counts.assign(bins, 0);
  for (auto len : lengths) ++h.counts[len / bin_width];
  return h;
}

json to_json(const LengthHistogram& h) {
  return json{{"unit", text::to_string(h.unit)}, {"edges", h.edges}, {"counts", h.counts}, {"total", h.total()}};
}

}  // namespace ik::stats
