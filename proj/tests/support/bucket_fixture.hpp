#pragma once

// Twelve items, three per default bucket, with ROUGE-L values worked out by
// hand (whitespace tokens, beta = 1). "gpt-4" is the reference model.

#include <string>
#include <vector>

#include "instructkit/eval.hpp"

namespace ik::testing {

inline std::string seq(const std::string& stem, int from, int to) {
  std::string out;
  for (int i = from; i <= to; ++i) out += (out.empty() ? "" : " ") + stem + std::to_string(i);
  return out;
}

struct BucketFixture {
  std::vector<eval::ModelItems> models;
  // per bucket, in order
  std::vector<double> gpt4_mean, mine_mean;
  double gpt4_overall, mine_overall;
};

inline BucketFixture bucket_fixture() {
  struct Row {
    std::string ref, gpt4, mine;
  };
  const std::vector<Row> rows = {
      // <= 3 tokens
      {"a b c", "a b c", "a b"},  // 1 | P=1 R=2/3 F=4/5
      {"x y", "x y", "z"},        // 1 | 0
      {"p", "q", "p"},            // 0 | 1
      // 4-6
      {"a b c d", "a b c d", "a c d e"},                                            // 1 | 3/4
      {"a b c d e", "a b", "a b c d e"},                                            // 4/7 | 1
      {"one two three four five six", "one two three", "six five four three two one"},  // 2/3 | 1/6
      // 7-10
      {"a b c d e f g", "a b c d e f g", "a b c d e f g"},  // 1 | 1
      {"a b c d e f g h", "a b c d", "h"},                  // 2/3 | 2/9
      {seq("t", 1, 10), "x", seq("t", 1, 5)},               // 0 | 2/3
      // > 10
      {seq("w", 1, 11), seq("w", 1, 11), seq("w", 1, 11)},                         // 1 | 1
      {seq("w", 1, 12), seq("w", 1, 6), seq("w", 1, 12) + " extra extra extra extra"},  // 2/3 | 6/7
      {seq("v", 1, 12), "zz", "zz"},                                                // 0 | 0
  };
  BucketFixture f;
  eval::ModelItems gpt4{"gpt-4", {}}, mine{"mine", {}};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto id = "item-" + std::to_string(i + 1);
    gpt4.items.push_back({id, rows[i].gpt4, rows[i].ref});
    mine.items.push_back({id, rows[i].mine, rows[i].ref});
  }
  f.models = {gpt4, mine};
  f.gpt4_mean = {2.0 / 3, 47.0 / 63, 5.0 / 9, 5.0 / 9};
  f.mine_mean = {3.0 / 5, 23.0 / 36, 17.0 / 27, 13.0 / 21};
  f.gpt4_overall = 53.0 / 84;
  f.mine_overall = 9403.0 / 15120;
  return f;
}

}  // namespace ik::testing
