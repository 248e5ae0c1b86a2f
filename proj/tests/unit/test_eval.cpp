#include <cmath>
#include <functional>
#include <random>

#include "../support/bucket_fixture.hpp"
#include "doctest.h"
#include "instructkit/backends.hpp"
#include "instructkit/error.hpp"
#include "instructkit/eval.hpp"

using namespace ik;
using namespace ik::eval;

namespace {

teacher::RetryPolicy no_sleep() {
  teacher::RetryPolicy p;
  p.sleep = [](std::chrono::milliseconds) {};
  return p;
}

// Longest common subsequence by trying every subsequence of the shorter side.
std::size_t brute_lcs(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  const auto& s = a.size() <= b.size() ? a : b;
  const auto& t = a.size() <= b.size() ? b : a;
  std::size_t best = 0;
  for (std::uint32_t mask = 0; mask < (1u << s.size()); ++mask) {
    std::size_t j = 0, len = 0;
    bool ok = true;
    for (std::size_t i = 0; i < s.size() && ok; ++i) {
      if (!(mask >> i & 1)) continue;
      while (j < t.size() && t[j] != s[i]) ++j;
      if (j == t.size()) ok = false;
      else {
        ++j;
        ++len;
      }
    }
    if (ok) best = std::max(best, len);
  }
  return best;
}

JudgeVerdict verdict(std::string q, double a, double b) { return {q, "m", "o", a, b, "", "judge-v1", false}; }

}  // namespace

TEST_CASE("judge parsing and un-swapping") {
  teacher::MockBackend fixed([](const teacher::ChatRequest&) { return std::string("8 9"); });
  auto v = judge_pair("q1", "Q", "A", "B", "ma", "mb", {}, fixed, false, no_sleep());
  CHECK(v.score_a == 8);
  CHECK(v.score_b == 9);
  CHECK(v.prompt_version == "judge-v1");
  auto s = judge_pair("q1", "Q", "A", "B", "ma", "mb", {}, fixed, true, no_sleep());
  CHECK(s.score_a == 9);
  CHECK(s.score_b == 8);
  CHECK(s.swapped);

  teacher::MockBackend chatty([](const teacher::ChatRequest&) { return std::string("great answers!"); });
  try {
    judge_pair("q1", "Q", "A", "B", "ma", "mb", {}, chatty, false, no_sleep());
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.raw() == "great answers!");
    CHECK(chatty.calls() == 2);
  }
}

TEST_CASE("swapped prompt really shows b first") {
  teacher::MockBackend stock;
  auto plain = judge_pair("q", "Q", "short", "a much longer and more varied answer with many distinct words here", "a",
                          "b", {}, stock, false, no_sleep());
  auto swapped = judge_pair("q", "Q", "short", "a much longer and more varied answer with many distinct words here",
                            "a", "b", {}, stock, true, no_sleep());
  CHECK(plain.score_a == swapped.score_a);
  CHECK(plain.score_b == swapped.score_b);
  CHECK(plain.score_b > plain.score_a);
}

TEST_CASE("relative score") {
  std::vector<JudgeVerdict> full;
  for (int i = 0; i < 80; ++i) full.push_back(verdict("q" + std::to_string(i), 10, 10));
  auto r = relative_score(full);
  CHECK(r.sum_model == 800);
  CHECK(r.sum_opponent == 800);
  CHECK(r.max_sum == 800);
  CHECK(*r.relative_percent == 100.0);

  auto two = relative_score({verdict("a", 7, 10), verdict("b", 7, 10)});
  CHECK(two.sum_model == 14);
  CHECK(two.sum_opponent == 20);
  CHECK(*two.relative_percent == doctest::Approx(70.0).epsilon(1e-12));

  CHECK_THROWS_AS(relative_score({}), ValidationError);
  CHECK_THROWS_AS(relative_score({verdict("a", 7, 10), verdict("a", 7, 10)}), ValidationError);
}

TEST_CASE("relative score is scale invariant") {
  std::vector<JudgeVerdict> v = {verdict("a", 2, 4), verdict("b", 3, 1), verdict("c", 1.5, 2.5)};
  auto base = *relative_score(v).relative_percent;
  for (auto& x : v) {
    x.score_a *= 2;
    x.score_b *= 2;
  }
  CHECK(*relative_score(v).relative_percent == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("rouge-l values") {
  CHECK(rouge_l("a b c", "a b c") == 1.0);
  CHECK(rouge_l("a b", "c d") == 0.0);
  CHECK(rouge_l("", "a") == 0.0);
  CHECK(rouge_l("a", "") == 0.0);
  CHECK(rouge_l("a b c d", "a c d e") == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(rouge_l("你好世界", "你们好") == doctest::Approx(2.0 * (2.0 / 4) * (2.0 / 3) / (2.0 / 4 + 2.0 / 3)));
  CHECK(rouge_l("a b", "a b c", 1e6) == doctest::Approx(2.0 / 3).epsilon(1e-6));
  CHECK(rouge_l("x y z w", "w z y x") == rouge_l("w z y x", "x y z w"));
}

TEST_CASE("dp lcs equals exhaustive search on small sequences") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> len(0, 8), sym(0, 2);
  for (int trial = 0; trial < 3000; ++trial) {
    std::vector<std::string> a(len(rng)), b(len(rng));
    for (auto& x : a) x = std::string(1, static_cast<char>('a' + sym(rng)));
    for (auto& x : b) x = std::string(1, static_cast<char>('a' + sym(rng)));
    REQUIRE(lcs_length(a, b) == brute_lcs(a, b));
  }
}

TEST_CASE("bucket report on the hand-computed fixture") {
  auto f = testing::bucket_fixture();
  auto rep = bucket_rouge(f.models, kDefaultBucketEdges, "gpt-4", 1.0, text::TokenUnit::whitespace);
  REQUIRE(rep.buckets.size() == 4);
  std::size_t counted = 0;
  for (std::size_t b = 0; b < 4; ++b) {
    CHECK(rep.buckets[b].count == 3);
    counted += rep.buckets[b].count;
    CHECK(std::fabs(rep.buckets[b].mean.at("gpt-4") - f.gpt4_mean[b]) < 1e-9);
    CHECK(std::fabs(rep.buckets[b].mean.at("mine") - f.mine_mean[b]) < 1e-9);
    CHECK(std::fabs(rep.buckets[b].diff_vs_reference.at("mine") - (f.mine_mean[b] - f.gpt4_mean[b])) < 1e-9);
    CHECK(rep.buckets[b].diff_vs_reference.at("gpt-4") == 0.0);
  }
  CHECK(counted == 12);
  CHECK(std::fabs(rep.overall.at("gpt-4") - f.gpt4_overall) < 1e-9);
  CHECK(std::fabs(rep.overall.at("mine") - f.mine_overall) < 1e-9);
  CHECK(rep.buckets[0].label() == "<=3");
  CHECK(rep.buckets[1].label() == "4-6");
  CHECK(rep.buckets[3].label() == ">10");
}

TEST_CASE("bucket edge cases") {
  ModelItems m{"m", {{"1", "x y", "x y"}, {"2", "a b", "a b"}}};
  auto rep = bucket_rouge({m}, {3, 6, 9}, "m");
  CHECK(rep.buckets[0].count == 2);
  CHECK(rep.buckets[0].mean.at("m") == 1.0);
  CHECK(rep.buckets[0].diff_vs_reference.at("m") == 0.0);
  CHECK_FALSE(rep.buckets[1].mean.count("m"));
  CHECK_THROWS_AS(bucket_rouge({m}, {3, 3, 9}), ValidationError);
  CHECK_THROWS_AS(bucket_rouge({m}, {6, 3}), ValidationError);
  ModelItems other{"o", {{"1", "x", "x y"}}};
  CHECK_THROWS_AS(bucket_rouge({m, other}), ValidationError);
}

TEST_CASE("seeded sampling") {
  auto a = sample_indices(68478, 9000, 5);
  CHECK(a.size() == 9000);
  CHECK(a == sample_indices(68478, 9000, 5));
  CHECK(a != sample_indices(68478, 9000, 6));
  CHECK(std::adjacent_find(a.begin(), a.end()) == a.end());
  CHECK(sample_indices(5, 10, 1).size() == 5);
}

TEST_CASE("hhh tally") {
  auto vote = [](std::map<Criterion, Option> c) { return HhhVote{"t", "x", "A", "B", std::move(c), 0, 0}; };
  std::vector<HhhVote> votes = {vote({{Criterion::helpfulness, Option::a_strong}}),
                                vote({{Criterion::helpfulness, Option::a_weak}}),
                                vote({{Criterion::helpfulness, Option::tie}})};
  auto t = tally_hhh(votes);
  REQUIRE(t.size() == 1);
  CHECK(t[0].criterion == Criterion::helpfulness);
  CHECK(t[0].a_fraction() == doctest::Approx(2.0 / 3));
  CHECK(t[0].tie_fraction() == doctest::Approx(1.0 / 3));
  CHECK(t[0].b_fraction() == 0.0);
  CHECK(std::fabs(t[0].a_fraction() + t[0].tie_fraction() + t[0].b_fraction() - 1.0) < 1e-9);

  CHECK_THROWS_AS(vote_from_json(json::parse(R"({"task_id": "t", "choices": {"kindness": "tie"}})")), ValidationError);
  CHECK_THROWS_AS(vote_from_json(json::parse(R"({"task_id": "t", "choices": {"honesty": "maybe"}})")), ValidationError);
  auto back = vote_from_json(to_json(votes[0]));
  CHECK(back == votes[0]);
  CHECK(flip(Option::a_weak) == Option::b_weak);
  CHECK(flip(Option::tie) == Option::tie);
}
