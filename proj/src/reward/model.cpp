#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>

#include "instructkit/dataset.hpp"
#include "instructkit/error.hpp"
#include "instructkit/parallel.hpp"
#include "instructkit/reward.hpp"

namespace ik::reward {

namespace {

constexpr std::string_view kCheckpointFormat = "instructkit-reward";
constexpr int kCheckpointVersion = 1;

void require_finite(const SparseVector& v) {
  for (double x : v.value) {
    if (!std::isfinite(x)) throw NumericalError("reward", "non-finite feature value");
  }
}

SparseVector pair_delta(const Featurizer& f, const TrainingPair& p) {
  auto d = subtract(f.features(p.prompt, p.y_high), f.features(p.prompt, p.y_low));
  require_finite(d);
  return d;
}

}  // namespace

RewardModel RewardModel::zeros(FeaturizerConfig config) {
  RewardModel m{Featurizer(std::move(config)), {}, 0.0, {}};
  m.theta.assign(m.featurizer.config().dim, 0.0);
  return m;
}

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double loss_from_margin(double m) {
  // softplus(-m) without overflow on either side
  return m >= 0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
}

double margin(const RewardModel& model, const TrainingPair& pair) {
  return dot(model.theta, pair_delta(model.featurizer, pair));
}

double pair_loss(const RewardModel& model, const TrainingPair& pair) {
  const double m = margin(model, pair);
  if (!std::isfinite(m)) throw NumericalError("reward", "non-finite margin");
  return loss_from_margin(m);
}

SparseVector loss_gradient(const RewardModel& model, const TrainingPair& pair) {
  auto d = pair_delta(model.featurizer, pair);
  const double m = dot(model.theta, d);
  if (!std::isfinite(m)) throw NumericalError("reward", "non-finite margin");
  const double c = -sigmoid(-m);
  for (double& v : d.value) v *= c;
  return d;
}

std::vector<TrainingPair> build_pairs(const ComparisonRecord& record) {
  std::vector<TrainingPair> out;
  const auto& r = record.responses;
  for (std::size_t i = 0; i < r.size(); ++i) {
    for (std::size_t j = i + 1; j < r.size(); ++j) {
      if (r[i].score == r[j].score) continue;
      const auto& lo = r[i].score < r[j].score ? r[i] : r[j];
      const auto& hi = r[i].score < r[j].score ? r[j] : r[i];
      out.push_back({record.prompt, lo.text, hi.text, lo.score, hi.score});
    }
  }
  return out;
}

std::vector<TrainingPair> build_pairs(const std::vector<ComparisonRecord>& records) {
  std::vector<TrainingPair> out;
  for (const auto& r : records) {
    auto p = build_pairs(r);
    out.insert(out.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
  }
  return out;
}

RewardModel train(const std::vector<TrainingPair>& pairs, const TrainConfig& config,
                  const FeaturizerConfig& features) {
  if (pairs.empty()) throw ValidationError("reward", "training needs at least one pair");
  if (!(config.learning_rate > 0) || !std::isfinite(config.learning_rate)) {
    throw ValidationError("reward", "learning rate must be positive");
  }
  RewardModel model = RewardModel::zeros(features);
  std::vector<SparseVector> deltas(pairs.size());
  parallel_for(pairs.size(), config.workers, [&](std::size_t i) { deltas[i] = pair_delta(model.featurizer, pairs[i]); });

  const bool full = config.batch_size == 0 || config.batch_size >= pairs.size();
  const std::size_t batch = full ? pairs.size() : config.batch_size;
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(config.seed);
  std::size_t cursor = pairs.size();  // forces a shuffle before the first minibatch
  std::vector<double> margins(batch);
  std::vector<std::size_t> picked(batch);

  for (std::size_t step = 0; step < config.steps; ++step) {
    if (full) {
      std::iota(picked.begin(), picked.end(), 0);
    } else {
      for (std::size_t k = 0; k < batch; ++k) {
        if (cursor == order.size()) {
          std::shuffle(order.begin(), order.end(), rng);
          cursor = 0;
        }
        picked[k] = order[cursor++];
      }
    }
    double loss = 0.0;
    bool finite = true;
    for (std::size_t k = 0; k < batch; ++k) {
      margins[k] = dot(model.theta, deltas[picked[k]]);
      finite = finite && std::isfinite(margins[k]);
      loss += loss_from_margin(margins[k]);
    }
    if (!finite || !std::isfinite(loss)) {
      throw NumericalError("reward", "training diverged: non-finite loss at step " + std::to_string(step));
    }
    if (full) model.meta.loss_curve.push_back(loss / static_cast<double>(batch));
    for (std::size_t k = 0; k < batch; ++k) {
      const double c = config.learning_rate * sigmoid(-margins[k]) / static_cast<double>(batch);
      const auto& d = deltas[picked[k]];
      for (std::size_t t = 0; t < d.nnz(); ++t) model.theta[d.index[t]] += c * d.value[t];
    }
  }

  double loss = 0.0;
  std::size_t correct = 0;
  for (const auto& d : deltas) {
    const double m = dot(model.theta, d);
    loss += loss_from_margin(m);
    correct += m > 0;
  }
  if (!std::isfinite(loss)) {
    throw NumericalError("reward", "training diverged: non-finite loss at step " + std::to_string(config.steps));
  }
  auto& meta = model.meta;
  meta.steps = config.steps;
  meta.learning_rate = config.learning_rate;
  meta.batch_size = batch;
  meta.seed = config.seed;
  meta.pairs = pairs.size();
  meta.final_loss = loss / static_cast<double>(pairs.size());
  meta.accuracy = static_cast<double>(correct) / static_cast<double>(pairs.size());
  return model;
}

double score(const RewardModel& model, std::string_view prompt, std::string_view response) {
  return dot(model.theta, model.featurizer.features(prompt, response)) + model.bias;
}

double pair_accuracy(const RewardModel& model, const std::vector<TrainingPair>& pairs) {
  if (pairs.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& p : pairs) correct += margin(model, p) > 0;
  return static_cast<double>(correct) / static_cast<double>(pairs.size());
}

void save_model(const RewardModel& model, const std::filesystem::path& path) {
  const auto& fc = model.featurizer.config();
  const auto& m = model.meta;
  json header = {{"format", kCheckpointFormat},
                 {"version", kCheckpointVersion},
                 {"recipe", fc.recipe},
                 {"seed", fc.seed},
                 {"dim", fc.dim},
                 {"bias", model.bias},
                 {"training",
                  {{"steps", m.steps},
                   {"learning_rate", m.learning_rate},
                   {"batch_size", m.batch_size},
                   {"seed", m.seed},
                   {"pairs", m.pairs},
                   {"final_loss", m.final_loss},
                   {"accuracy", m.accuracy}}}};
  std::string out = header.dump() + "\n";
  char buf[64];
  for (std::size_t i = 0; i < model.theta.size(); ++i) {
    if (model.theta[i] == 0.0) continue;
    std::snprintf(buf, sizeof buf, "%zu %.17g\n", i, model.theta[i]);
    out += buf;
  }
  write_file_atomic(path, out);
}

RewardModel load_model(const std::filesystem::path& path) {
  const std::string content = read_file(path);
  std::istringstream in(content);
  std::string line;
  const std::string origin = path.string();
  if (!std::getline(in, line)) throw SchemaError("reward", origin + ": empty checkpoint");
  json h;
  try {
    h = json::parse(line);
  } catch (const json::exception& e) {
    throw SchemaError("reward", origin + ": bad checkpoint header: " + e.what());
  }
  if (h.value("format", "") != kCheckpointFormat) throw SchemaError("reward", origin + ": not a reward checkpoint");
  if (h.value("version", 0) != kCheckpointVersion) {
    throw SchemaError("reward", origin + ": unsupported checkpoint version " + h["version"].dump());
  }
  FeaturizerConfig fc{h.at("dim").get<std::size_t>(), h.at("seed").get<std::uint64_t>(), h.at("recipe").get<std::string>()};
  RewardModel model = RewardModel::zeros(fc);
  model.bias = h.value("bias", 0.0);
  if (h.contains("training")) {
    const auto& t = h["training"];
    model.meta.steps = t.value("steps", std::size_t{0});
    model.meta.learning_rate = t.value("learning_rate", 0.0);
    model.meta.batch_size = t.value("batch_size", std::size_t{0});
    model.meta.seed = t.value("seed", std::uint64_t{0});
    model.meta.pairs = t.value("pairs", std::size_t{0});
    model.meta.final_loss = t.value("final_loss", 0.0);
    model.meta.accuracy = t.value("accuracy", 0.0);
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::size_t index = 0;
    double value = 0;
    if (std::sscanf(line.c_str(), "%zu %lf", &index, &value) != 2 || index >= fc.dim) {
      throw SchemaError("reward", origin + ": bad parameter at line " + std::to_string(lineno));
    }
    if (!std::isfinite(value)) {
      throw NumericalError("reward", origin + ": non-finite parameter at line " + std::to_string(lineno));
    }
    model.theta[index] = value;
  }
  return model;
}

}  // namespace ik::reward
