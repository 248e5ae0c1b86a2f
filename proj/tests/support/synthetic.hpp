#pragma once

// Comparison corpora whose ordering is decided by marker words, for checking
// that the reward model can learn a separable signal.

#include <random>
#include <string>
#include <vector>

#include "instructkit/records.hpp"

namespace ik::testing {

inline const std::vector<std::string>& filler_words() {
  static const std::vector<std::string> kWords = {
      "the", "cat", "river", "blue", "house", "quickly", "seven", "paper", "garden", "light", "stone", "window",
      "apple", "train", "music", "cloud", "road", "table", "winter", "forest", "market", "letter", "field", "bird"};
  return kWords;
}

inline std::string filler(std::mt19937_64& rng, std::size_t n) {
  const auto& w = filler_words();
  std::uniform_int_distribution<std::size_t> pick(0, w.size() - 1);
  std::string out;
  for (std::size_t i = 0; i < n; ++i) out += (i ? " " : "") + w[pick(rng)];
  return out;
}

// Each record: three responses of random filler; one carries "great"
// (score 9), one "good" (6), one neither (3). Positions and lengths vary.
inline std::vector<ComparisonRecord> marker_corpus(std::size_t records, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> len(4, 14);
  std::vector<ComparisonRecord> out;
  for (std::size_t r = 0; r < records; ++r) {
    ComparisonRecord rec;
    rec.prompt = "Describe " + filler(rng, 3);
    const std::pair<const char*, double> kinds[] = {{"great", 9}, {"good", 6}, {nullptr, 3}};
    for (const auto& [marker, s] : kinds) {
      std::string body = filler(rng, len(rng));
      if (marker) {
        std::uniform_int_distribution<std::size_t> at(0, 1);
        body = at(rng) ? body + " " + marker : std::string(marker) + " " + body;
      }
      rec.responses.push_back({body, "synthetic", s, json::object()});
    }
    std::shuffle(rec.responses.begin(), rec.responses.end(), rng);
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace ik::testing
