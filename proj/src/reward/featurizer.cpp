#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>

#include "instructkit/error.hpp"
#include "instructkit/hashing.hpp"
#include "instructkit/reward.hpp"
#include "instructkit/text.hpp"

namespace ik::reward {

namespace {

constexpr double kLengthScale = 512.0;

std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  for (auto& tok : text::tokenize(s, text::TokenUnit::mixed)) {
    std::size_t b = 0, e = tok.size();
    while (b < e && std::ispunct(static_cast<unsigned char>(tok[b]))) ++b;
    while (e > b && std::ispunct(static_cast<unsigned char>(tok[e - 1]))) --e;
    if (b < e) out.push_back(text::to_lower_ascii(std::string_view(tok).substr(b, e - b)));
  }
  return out;
}

}  // namespace

SparseVector subtract(const SparseVector& a, const SparseVector& b) {
  SparseVector out;
  std::size_t i = 0, j = 0;
  while (i < a.nnz() || j < b.nnz()) {
    if (j == b.nnz() || (i < a.nnz() && a.index[i] < b.index[j])) {
      out.index.push_back(a.index[i]);
      out.value.push_back(a.value[i++]);
    } else if (i == a.nnz() || b.index[j] < a.index[i]) {
      out.index.push_back(b.index[j]);
      out.value.push_back(-b.value[j++]);
    } else {
      double v = a.value[i] - b.value[j];
      if (v != 0.0) {
        out.index.push_back(a.index[i]);
        out.value.push_back(v);
      }
      ++i;
      ++j;
    }
  }
  return out;
}

double dot(const std::vector<double>& dense, const SparseVector& x) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.nnz(); ++k) s += dense[x.index[k]] * x.value[k];
  return s;
}

Featurizer::Featurizer(FeaturizerConfig config) : config_(std::move(config)) {
  if (config_.dim < 3) throw ValidationError("reward", "feature dimension must be at least 3");
  if (config_.dim > (std::size_t{1} << 31)) throw ValidationError("reward", "feature dimension too large");
  if (config_.recipe != kRecipeVersion) {
    throw ValidationError("reward", "unknown feature recipe '" + config_.recipe + "'");
  }
}

SparseVector Featurizer::features(std::string_view prompt, std::string_view response) const {
  const auto resp = words(response);
  const auto len = static_cast<double>(resp.size());
  std::map<std::uint32_t, double> acc;
  acc[0] = len / kLengthScale;
  acc[1] = std::log1p(len) / std::log1p(kLengthScale);

  auto add_block = [&](const std::set<std::string>& keys) {
    if (keys.empty()) return;
    const double w = 1.0 / std::sqrt(static_cast<double>(keys.size()));
    for (const auto& k : keys) {
      auto slot = 2 + hash64(k, config_.seed) % (config_.dim - 2);
      acc[static_cast<std::uint32_t>(slot)] += w;
    }
  };

  std::set<std::string> grams;
  for (std::size_t i = 0; i < resp.size(); ++i) {
    grams.insert("u:" + resp[i]);
    if (i + 1 < resp.size()) grams.insert("b:" + resp[i] + " " + resp[i + 1]);
  }
  add_block(grams);

  const auto prm = words(prompt);
  std::set<std::string> prompt_set(prm.begin(), prm.end()), overlap;
  for (const auto& w : resp) {
    if (prompt_set.count(w)) overlap.insert("o:" + w);
  }
  add_block(overlap);

  SparseVector out;
  for (const auto& [i, v] : acc) {
    if (v == 0.0) continue;
    out.index.push_back(i);
    out.value.push_back(v);
  }
  return out;
}

}  // namespace ik::reward
