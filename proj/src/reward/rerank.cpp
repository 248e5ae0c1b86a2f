#include <algorithm>
#include <cmath>
#include <map>

#include "instructkit/error.hpp"
#include "instructkit/reward.hpp"

namespace ik::reward {

RankedGroups rerank(const std::vector<ResponseRecord>& responses, const ScoreFn& score_fn,
                    const std::string& baseline_model) {
  RankedGroups out;
  std::map<std::string, std::size_t> slot;
  for (const auto& r : responses) {
    auto [it, fresh] = slot.emplace(r.instance_id, out.questions.size());
    if (fresh) out.questions.push_back({r.instance_id, {}, std::nullopt});
    auto& q = out.questions[it->second];
    RankedResponse rr{r, score_fn(r)};
    if (!std::isfinite(rr.score)) throw NumericalError("reward", "non-finite score for " + r.instance_id);
    if (!baseline_model.empty() && r.model == baseline_model) {
      if (q.baseline) throw ValidationError("reward", "question " + r.instance_id + " has two baseline responses");
      q.baseline = std::move(rr);
    } else {
      q.ranked.push_back(std::move(rr));
    }
  }
  if (out.questions.empty()) return out;

  // n is the most common count; everyone else is an offender
  std::map<std::size_t, std::size_t> sizes;
  for (const auto& q : out.questions) ++sizes[q.ranked.size()];
  out.n = std::max_element(sizes.begin(), sizes.end(), [](auto& a, auto& b) { return a.second < b.second; })->first;
  std::string offenders;
  for (const auto& q : out.questions) {
    if (q.ranked.size() != out.n) {
      offenders += (offenders.empty() ? "" : ", ") + q.instance_id + " (" + std::to_string(q.ranked.size()) + ")";
    }
  }
  if (!offenders.empty() || out.n == 0) {
    throw ValidationError("reward", "every question needs the same number of responses (expected " +
                                        std::to_string(out.n) + "): " + offenders);
  }

  out.groups.assign(out.n, {});
  for (auto& q : out.questions) {
    std::stable_sort(q.ranked.begin(), q.ranked.end(), [](const RankedResponse& a, const RankedResponse& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.record.decode_index < b.record.decode_index;
    });
    for (std::size_t g = 0; g < out.n; ++g) out.groups[g].push_back(q.ranked[g].record);
    if (q.baseline) out.baseline.push_back(q.baseline->record);
  }
  return out;
}

RankedGroups rerank(const RewardModel& model, const std::vector<ResponseRecord>& responses,
                    const std::map<std::string, std::string>& prompts, const std::string& baseline_model) {
  return rerank(
      responses,
      [&](const ResponseRecord& r) {
        auto it = prompts.find(r.instance_id);
        if (it == prompts.end()) throw NotFoundError("reward", "no prompt for instance " + r.instance_id);
        return score(model, it->second, r.text);
      },
      baseline_model);
}

std::size_t ScoreHistogram::total() const {
  std::size_t t = 0;
  for (const auto& [_, c] : bins) t += c;
  return t;
}

ScoreHistogram score_distribution(const std::vector<ComparisonRecord>& records) {
  std::map<double, std::size_t> counts;
  for (const auto& r : records) {
    for (const auto& s : r.responses) ++counts[s.score];
  }
  return {"comparison", 0.0, {counts.begin(), counts.end()}};
}

ScoreHistogram score_distribution(const std::vector<double>& model_scores, double bin_width) {
  if (!(bin_width > 0)) throw ValidationError("reward", "bin width must be positive");
  std::map<double, std::size_t> counts;
  for (double s : model_scores) {
    if (!std::isfinite(s)) throw NumericalError("reward", "non-finite score in distribution");
    ++counts[std::floor(s / bin_width) * bin_width];
  }
  return {"model", bin_width, {counts.begin(), counts.end()}};
}

json to_json(const ScoreHistogram& h) {
  json bins = json::array();
  for (const auto& [start, count] : h.bins) bins.push_back({{"score", number_json(start)}, {"count", count}});
  return {{"source", h.source}, {"bin_width", h.bin_width}, {"bins", bins}, {"total", h.total()}};
}

}  // namespace ik::reward
