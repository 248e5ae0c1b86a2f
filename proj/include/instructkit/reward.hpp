#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "instructkit/records.hpp"

namespace ik::reward {

/// Sorted, duplicate-free (index, value) list.
struct SparseVector {
  std::vector<std::uint32_t> index;
  std::vector<double> value;

  std::size_t nnz() const { return index.size(); }
  friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

/// a - b
SparseVector subtract(const SparseVector& a, const SparseVector& b);
double dot(const std::vector<double>& dense, const SparseVector& x);

inline constexpr std::string_view kRecipeVersion = "len-ngram-overlap-v1";

struct FeaturizerConfig {
  std::size_t dim = std::size_t{1} << 18;
  std::uint64_t seed = 0;
  std::string recipe = std::string(kRecipeVersion);

  friend bool operator==(const FeaturizerConfig&, const FeaturizerConfig&) = default;
};

// Slot 0: length / 512, slot 1: log1p(length) / log1p(512). The rest of the
// space holds hashed presence features, each block scaled to unit L2 norm:
// response unigrams + bigrams, and unigrams shared by prompt and response.
class Featurizer {
 public:
  explicit Featurizer(FeaturizerConfig config = {});
  const FeaturizerConfig& config() const { return config_; }
  SparseVector features(std::string_view prompt, std::string_view response) const;

 private:
  FeaturizerConfig config_;
};

struct TrainConfig {
  double learning_rate = 0.5;
  std::size_t steps = 2000;     // parameter updates
  std::size_t batch_size = 32;  // 0 = full batch
  std::uint64_t seed = 0;
  std::size_t workers = 1;      // featurisation only; updates are sequential
};

struct TrainingMeta {
  std::size_t steps = 0;
  double learning_rate = 0.0;
  std::size_t batch_size = 0;
  std::uint64_t seed = 0;
  std::size_t pairs = 0;
  double final_loss = 0.0;
  double accuracy = 0.0;  // training pairs with positive margin
  std::vector<double> loss_curve;  // mean loss before each full-batch step, empty otherwise
};

struct RewardModel {
  Featurizer featurizer;
  std::vector<double> theta;
  double bias = 0.0;
  TrainingMeta meta;

  static RewardModel zeros(FeaturizerConfig config = {});
};

/// Stable -log(sigmoid(margin)).
double loss_from_margin(double margin);
double sigmoid(double x);

/// r(x, y_high) - r(x, y_low). The bias cancels.
double margin(const RewardModel& model, const TrainingPair& pair);
double pair_loss(const RewardModel& model, const TrainingPair& pair);
/// d loss / d theta = -sigmoid(-margin) * (phi_high - phi_low).
SparseVector loss_gradient(const RewardModel& model, const TrainingPair& pair);

/// Every unordered response pair with strictly unequal scores, low side first.
std::vector<TrainingPair> build_pairs(const ComparisonRecord& record);
std::vector<TrainingPair> build_pairs(const std::vector<ComparisonRecord>& records);

RewardModel train(const std::vector<TrainingPair>& pairs, const TrainConfig& config,
                  const FeaturizerConfig& features = {});

double score(const RewardModel& model, std::string_view prompt, std::string_view response);

/// Fraction of pairs the model orders correctly (margin > 0).
double pair_accuracy(const RewardModel& model, const std::vector<TrainingPair>& pairs);

// Checkpoint: one JSON header line, then "index value" lines for nonzero
// parameters.
void save_model(const RewardModel& model, const std::filesystem::path& path);
RewardModel load_model(const std::filesystem::path& path);

struct RankedResponse {
  ResponseRecord record;
  double score = 0.0;
};

struct QuestionRanking {
  std::string instance_id;
  std::vector<RankedResponse> ranked;  // best first
  std::optional<RankedResponse> baseline;
};

struct RankedGroups {
  std::size_t n = 0;
  std::vector<QuestionRanking> questions;     // in first-seen order
  std::vector<std::vector<ResponseRecord>> groups;  // groups[g] = rank g+1 response of every question
  std::vector<ResponseRecord> baseline;       // group B
};

using ScoreFn = std::function<double(const ResponseRecord&)>;

/// Sorts each question's n responses by descending score, ties by
/// decode_index. Records whose model equals `baseline_model` skip ranking.
RankedGroups rerank(const std::vector<ResponseRecord>& responses, const ScoreFn& score_fn,
                    const std::string& baseline_model = "");
RankedGroups rerank(const RewardModel& model, const std::vector<ResponseRecord>& responses,
                    const std::map<std::string, std::string>& prompts, const std::string& baseline_model = "");

struct ScoreHistogram {
  std::string source;  // "comparison" or "model"
  double bin_width = 0.0;  // 0 = exact values
  std::vector<std::pair<double, std::size_t>> bins;  // ascending bin start

  std::size_t total() const;
};

ScoreHistogram score_distribution(const std::vector<ComparisonRecord>& records);
ScoreHistogram score_distribution(const std::vector<double>& model_scores, double bin_width = 0.5);
json to_json(const ScoreHistogram& h);

}  // namespace ik::reward
