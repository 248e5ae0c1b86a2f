#include <algorithm>
#include <cstdint>
#include <cstring>
#include <map>
#include <numeric>
#include <random>

#include "instructkit/error.hpp"
#include "instructkit/eval.hpp"
#include "instructkit/parallel.hpp"

namespace ik::eval {

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a.empty() || b.empty()) return 0;
  // one rolling row; on the stack for the usual short inputs
  constexpr std::size_t kStack = 256;
  std::uint32_t stack[kStack + 1];
  std::vector<std::uint32_t> heap;
  std::uint32_t* row = stack;
  if (b.size() > kStack) {
    heap.assign(b.size() + 1, 0);
    row = heap.data();
  } else {
    std::fill(row, row + b.size() + 1, 0u);
  }
  const std::size_t n = b.size();
  for (const auto& x : a) {
    const std::size_t xs = x.size();
    const char* xd = x.data();
    std::uint32_t diag = 0, left = 0;
    for (std::size_t j = 1; j <= n; ++j) {
      const std::uint32_t up = row[j];
      const auto& y = b[j - 1];
      // first byte decides most mismatches without a memcmp call
      const bool eq = y.size() == xs && (xs == 0 || (y[0] == xd[0] && std::memcmp(y.data() + 1, xd + 1, xs - 1) == 0));
      left = eq ? diag + 1 : std::max(up, left);
      row[j] = left;
      diag = up;
    }
  }
  return row[n];
}

double rouge_l(std::string_view candidate, std::string_view reference, double beta, text::TokenUnit unit) {
  if (!(beta > 0)) throw ValidationError("eval", "beta must be positive");
  const auto c = text::tokenize(candidate, unit);
  const auto r = text::tokenize(reference, unit);
  const auto lcs = lcs_length(c, r);
  if (lcs == 0) return 0.0;
  if (lcs == c.size() && lcs == r.size()) return 1.0;
  const double p = static_cast<double>(lcs) / static_cast<double>(c.size());
  const double rec = static_cast<double>(lcs) / static_cast<double>(r.size());
  const double b2 = beta * beta;
  return (1 + b2) * p * rec / (rec + b2 * p);
}

std::string BucketStats::label() const {
  if (!hi) return ">" + std::to_string(lo - 1);
  if (lo == 0) return "<=" + std::to_string(*hi);
  return std::to_string(lo) + "-" + std::to_string(*hi);
}

RougeBucketReport bucket_rouge(const std::vector<ModelItems>& models, const std::vector<std::size_t>& edges,
                               const std::string& reference_model, double beta, text::TokenUnit unit,
                               std::size_t workers) {
  if (edges.empty()) throw ValidationError("eval", "at least one bucket edge is required");
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i] <= edges[i - 1]) throw ValidationError("eval", "bucket edges must be strictly ascending");
  }
  if (models.empty()) throw ValidationError("eval", "no models to evaluate");
  if (!reference_model.empty() &&
      std::none_of(models.begin(), models.end(), [&](const ModelItems& m) { return m.model == reference_model; })) {
    throw ValidationError("eval", "reference model '" + reference_model + "' is not among the evaluated models");
  }

  // the reference texts must agree across models
  std::map<std::string, std::string> refs;
  for (const auto& it : models.front().items) {
    if (!refs.emplace(it.id, it.reference).second) throw ValidationError("eval", "duplicate item id " + it.id);
  }
  for (const auto& m : models) {
    if (m.items.size() != refs.size()) {
      throw ValidationError("eval", "model " + m.model + " covers " + std::to_string(m.items.size()) +
                                        " items, expected " + std::to_string(refs.size()));
    }
    for (const auto& it : m.items) {
      auto f = refs.find(it.id);
      if (f == refs.end() || f->second != it.reference) {
        throw ValidationError("eval", "model " + m.model + " item " + it.id + " does not match the reference set");
      }
    }
  }

  RougeBucketReport rep;
  rep.edges = edges;
  rep.reference_model = reference_model;
  rep.beta = beta;
  rep.unit = unit;
  rep.items = refs.size();
  for (std::size_t b = 0; b <= edges.size(); ++b) {
    BucketStats s;
    s.lo = b == 0 ? 0 : edges[b - 1] + 1;
    if (b < edges.size()) s.hi = edges[b];
    rep.buckets.push_back(std::move(s));
  }
  auto bucket_of = [&](const std::string& ref) {
    const auto len = text::count_tokens(ref, unit);
    return static_cast<std::size_t>(std::lower_bound(edges.begin(), edges.end(), len) - edges.begin());
  };
  std::map<std::string, std::size_t> item_bucket;
  for (const auto& [id, ref] : refs) {
    item_bucket[id] = bucket_of(ref);
    ++rep.buckets[item_bucket[id]].count;
  }

  for (const auto& m : models) {
    std::vector<double> scores(m.items.size());
    parallel_for(m.items.size(), workers,
                 [&](std::size_t i) { scores[i] = rouge_l(m.items[i].candidate, m.items[i].reference, beta, unit); });
    std::vector<double> sum(rep.buckets.size(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < m.items.size(); ++i) {
      sum[item_bucket[m.items[i].id]] += scores[i];
      total += scores[i];
    }
    for (std::size_t b = 0; b < rep.buckets.size(); ++b) {
      if (rep.buckets[b].count) rep.buckets[b].mean[m.model] = sum[b] / static_cast<double>(rep.buckets[b].count);
    }
    if (rep.items) rep.overall[m.model] = total / static_cast<double>(rep.items);
  }
  if (!reference_model.empty()) {
    for (auto& b : rep.buckets) {
      if (!b.count) continue;
      for (const auto& [model, mean] : b.mean) b.diff_vs_reference[model] = mean - b.mean.at(reference_model);
    }
    for (const auto& [model, mean] : rep.overall) rep.overall_diff[model] = mean - rep.overall.at(reference_model);
  }
  return rep;
}

json to_json(const RougeBucketReport& r) {
  json buckets = json::array(), rows = json::array();
  for (const auto& b : r.buckets) {
    buckets.push_back({{"label", b.label()},
                       {"lo", b.lo},
                       {"hi", b.hi ? json(*b.hi) : json(nullptr)},
                       {"count", b.count},
                       {"mean", b.mean},
                       {"diff_vs_reference", b.diff_vs_reference}});
    for (const auto& [model, mean] : b.mean) {
      json row = {{"bucket", b.label()}, {"model", model}, {"mean", mean}, {"diff_vs_reference", nullptr}};
      if (auto d = b.diff_vs_reference.find(model); d != b.diff_vs_reference.end()) row["diff_vs_reference"] = d->second;
      rows.push_back(std::move(row));
    }
  }
  return {{"edges", r.edges},
          {"buckets", buckets},
          {"overall", r.overall},
          {"overall_diff", r.overall_diff},
          {"reference_model", r.reference_model},
          {"beta", r.beta},
          {"unit", text::to_string(r.unit)},
          {"items", r.items},
          {"plot_rows", rows}};
}

std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, std::uint64_t seed) {
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  if (k >= n) return all;
  // partial Fisher-Yates with our own index draws, so the result does not
  // depend on the standard library's distribution implementations
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng() % (n - i));
    std::swap(all[i], all[j]);
  }
  all.resize(k);
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace ik::eval
