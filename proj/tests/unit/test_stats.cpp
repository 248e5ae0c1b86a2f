#include <fstream>
#include <map>
#include <sstream>

#include "doctest.h"
#include "instructkit/corpus_stats.hpp"

using namespace ik;
using namespace ik::stats;

namespace {

struct Annotated {
  std::string sentence;
  std::optional<VerbNoun> expected;
};

std::vector<Annotated> load_annotations() {
  std::ifstream in(std::string(IK_FIXTURE_DIR) + "/verb_noun_annotated.tsv");
  REQUIRE(in);
  std::vector<Annotated> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    std::string sentence, verb, noun;
    std::getline(row, sentence, '\t');
    std::getline(row, verb, '\t');
    std::getline(row, noun, '\t');
    Annotated a{sentence, std::nullopt};
    if (verb != "-") a.expected = VerbNoun{verb, noun};
    out.push_back(std::move(a));
  }
  return out;
}

std::string show(const std::optional<VerbNoun>& vn) {
  return vn ? "(" + vn->verb + ", " + vn->noun + ")" : "absent";
}

}  // namespace

TEST_CASE("hand-annotated extraction fixture") {
  RuleTagger tagger;
  auto rows = load_annotations();
  CHECK(rows.size() == 50);
  int wrong = 0;
  for (const auto& row : rows) {
    auto got = extract_verb_noun(row.sentence, tagger);
    if (got != row.expected) {
      ++wrong;
      MESSAGE(row.sentence << " -> " << show(got) << ", expected " << show(row.expected));
    }
  }
  CHECK(wrong == 0);
}

TEST_CASE("extraction edge cases") {
  RuleTagger tagger;
  CHECK_FALSE(extract_verb_noun("", tagger));
  CHECK_FALSE(extract_verb_noun("Yes.", tagger));
  CHECK(extract_verb_noun("Writes stories.", tagger) == VerbNoun{"write", "story"});
  // only the first sentence counts by default
  CHECK(extract_verb_noun("Yes. Write a poem.", tagger) == std::nullopt);
  auto all = extract_all_verb_nouns("Yes. Write a poem. Read the book.", tagger);
  REQUIRE(all.size() == 2);
  CHECK(all[0] == VerbNoun{"write", "poem"});
  CHECK(all[1] == VerbNoun{"read", "book"});
}

TEST_CASE("lemmatizer") {
  CHECK(lemmatize_verb("writes") == "write");
  CHECK(lemmatize_verb("wrote") == "write");
  CHECK(lemmatize_verb("created") == "create");
  CHECK(lemmatize_verb("making") == "make");
  CHECK(lemmatize_verb("stopped") == "stop");
  CHECK(lemmatize_noun("stories") == "story");
  CHECK(lemmatize_noun("children") == "child");
  CHECK(lemmatize_noun("boxes") == "box");
  CHECK(lemmatize_noun("class") == "class");
}

TEST_CASE("pretagged adapter") {
  PretaggedTagger tagger;
  auto vn = extract_verb_noun("Compose/VB a/DT sonnet/NN ./.", tagger);
  CHECK(vn == VerbNoun{"compose", "sonnet"});
  vn = extract_verb_noun("She/PRON wrote/VERB/write letters/NOUN/letter", tagger);
  CHECK(vn == VerbNoun{"write", "letter"});
}

TEST_CASE("threshold is strict at the default setting") {
  RuleTagger tagger;
  std::vector<std::string> twelve(12, "Write a story."), ten(10, "Write a story.");
  auto p = pair_frequencies(twelve, tagger, kDefaultMinFrequency);
  REQUIRE(p.size() == 1);
  CHECK(p[0] == VerbNounPair{"write", "story", 12});
  CHECK(pair_frequencies(ten, tagger, kDefaultMinFrequency).empty());
  CHECK(pair_frequencies(ten, tagger, 10).size() == 1);
}

TEST_CASE("frequencies match a brute-force tally at any worker count") {
  RuleTagger tagger;
  const std::vector<std::string> pool = {"Write a story.", "Write a poem.", "Give three tips.", "Yes.",
                                         "Create a list of fruits.", "Describe the process."};
  std::vector<std::string> corpus;
  for (std::size_t i = 0; i < 300; ++i) corpus.push_back(pool[(i * 7 + i / 5) % pool.size()]);
  std::map<std::pair<std::string, std::string>, std::size_t> oracle;
  std::size_t extracted = 0;
  for (const auto& r : corpus) {
    if (auto vn = extract_verb_noun(r, tagger)) {
      ++oracle[{vn->verb, vn->noun}];
      ++extracted;
    }
  }
  for (std::size_t workers : {1, 3}) {
    auto pairs = pair_frequencies(corpus, tagger, 1, SentenceScope::first, workers);
    std::size_t sum = 0;
    for (const auto& p : pairs) {
      CHECK(oracle.at({p.verb, p.noun}) == p.frequency);
      sum += p.frequency;
    }
    CHECK(pairs.size() == oracle.size());
    CHECK(sum == extracted);
    for (std::size_t i = 1; i < pairs.size(); ++i) CHECK(pairs[i - 1].frequency >= pairs[i].frequency);
  }
}

TEST_CASE("top-k and tie order") {
  std::vector<VerbNounPair> pairs;
  for (int i = 0; i < 30; ++i) pairs.push_back({"v" + std::to_string(i % 3), "n" + std::to_string(i), 1});
  std::map<VerbNoun, std::size_t> counts;
  for (const auto& p : pairs) counts[{p.verb, p.noun}] = 1 + (p.noun == "n7" ? 5 : 0);
  auto sorted = sorted_pairs(counts, 1);
  CHECK(sorted.front().noun == "n7");
  CHECK(sorted[1].verb == "v0");
  CHECK(sorted[1].noun == "n0");
  CHECK(top_k_pairs(sorted, kDefaultTopK).size() == 25);
  CHECK(top_k_pairs(sorted, 100).size() == 30);
}

TEST_CASE("sunburst weights") {
  auto tree = sunburst_export({{"write", "story", 12}, {"write", "poem", 11}, {"give", "tip", 15}});
  REQUIRE(tree["children"].size() == 2);
  CHECK(tree["children"][0]["name"] == "write");
  CHECK(tree["children"][0]["value"] == 23);
  CHECK(tree["value"] == 38);
  for (const auto& verb : tree["children"]) {
    std::size_t sum = 0;
    for (const auto& noun : verb["children"]) sum += noun["value"].get<std::size_t>();
    CHECK(sum == verb["value"].get<std::size_t>());
  }
  CHECK(sunburst_export({})["children"].empty());
}

TEST_CASE("length histogram") {
  auto h = length_distribution({"a b", "a b c"}, text::TokenUnit::whitespace);
  CHECK(h.total() == 2);
  CHECK(h.counts[2] == 1);
  CHECK(h.counts[3] == 1);
  CHECK(length_distribution({}, text::TokenUnit::mixed).total() == 0);
  auto cjk = length_distribution({"你好 世界"}, text::TokenUnit::mixed);
  CHECK(cjk.counts[4] == 1);
  CHECK(to_json(cjk)["unit"] == "mixed");
}
