#include "commands.hpp"
#include "instructkit/error.hpp"
#include "instructkit/reward.hpp"
#include "instructkit/teacher.hpp"

namespace ik::cli {

namespace {

struct TrainArgs {
  std::string comparisons, out, distribution;
  double learning_rate = reward::TrainConfig{}.learning_rate;
  std::size_t steps = reward::TrainConfig{}.steps;
  std::size_t batch_size = reward::TrainConfig{}.batch_size;
  std::size_t dim_bits = 18;
};

int run_train(Context& ctx, const TrainArgs& a) {
  ctx.resolve();
  auto data = load_dataset(a.comparisons, DatasetKind::comparison);
  auto pairs = reward::build_pairs(data.comparisons());
  if (pairs.empty()) throw ValidationError("reward", a.comparisons + ": no response pair has unequal scores");
  if (a.dim_bits < 4 || a.dim_bits > 26) throw ValidationError("cli", "--dim-bits must be in [4, 26]");

  reward::TrainConfig tc;
  tc.learning_rate = a.learning_rate;
  tc.steps = a.steps;
  tc.batch_size = a.batch_size;
  tc.seed = ctx.seed();
  tc.workers = ctx.workers();
  reward::FeaturizerConfig fc;
  fc.dim = std::size_t{1} << a.dim_bits;
  fc.seed = ctx.seed();

  auto model = reward::train(pairs, tc, fc);
  if (fs::path(a.out).has_parent_path()) fs::create_directories(fs::path(a.out).parent_path());
  reward::save_model(model, a.out);
  json meta = ctx.run_meta("train-reward", {{"comparisons", a.comparisons}});
  meta["pairs"] = pairs.size();
  meta["final_loss"] = model.meta.final_loss;
  meta["train_accuracy"] = model.meta.accuracy;
  meta["recipe"] = fc.recipe;
  write_meta(a.out, meta);

  json summary = {{"command", "train-reward"},
                  {"out", a.out},
                  {"pairs", pairs.size()},
                  {"final_loss", model.meta.final_loss},
                  {"train_accuracy", model.meta.accuracy}};
  if (!a.distribution.empty()) {
    save_json(a.distribution, reward::to_json(reward::score_distribution(data.comparisons())), meta);
    summary["distribution"] = a.distribution;
  }
  return finish(summary, 0);
}

struct RerankArgs {
  std::string model, instances, out_dir, baseline_model, kind = "instruction";
  std::vector<std::string> responses;
  std::optional<std::string> templates;
  double bin_width = 0.5;
};

int run_rerank(Context& ctx, const RerankArgs& a) {
  ctx.resolve();
  auto model = reward::load_model(a.model);
  auto options = ctx.workflow_options(a.templates);
  auto instances = load_instances(a.instances, a.kind);
  std::map<std::string, std::string> prompts;
  for (const auto& inst : instances.instances()) prompts[inst.id] = teacher::render_prompt(inst, options.templates);

  std::vector<ResponseRecord> responses;
  std::map<std::string, fs::path> inputs = {{"model", a.model}, {"instances", a.instances}};
  for (std::size_t i = 0; i < a.responses.size(); ++i) {
    auto set = load_answers(a.responses[i]);
    for (auto& r : set.records) responses.push_back(std::move(r));
    inputs["responses_" + std::to_string(i + 1)] = a.responses[i];
  }

  // score once; the ranking and the written records reuse it
  std::map<std::tuple<std::string, std::string, std::int64_t>, double> scores;
  std::vector<double> all_scores;
  for (const auto& r : responses) {
    auto it = prompts.find(r.instance_id);
    if (it == prompts.end()) throw NotFoundError("reward", "no instance for response " + r.instance_id);
    double s = reward::score(model, it->second, r.text);
    scores[{r.instance_id, r.model, r.decode_index}] = s;
    if (r.model != a.baseline_model) all_scores.push_back(s);
  }
  auto key = [](const ResponseRecord& r) { return std::make_tuple(r.instance_id, r.model, r.decode_index); };
  auto groups = reward::rerank(responses, [&](const ResponseRecord& r) { return scores.at(key(r)); },
                               a.baseline_model);

  json meta = ctx.run_meta("rerank", inputs, &options.templates);
  meta["n"] = groups.n;
  meta["baseline_model"] = a.baseline_model;
  const fs::path dir = a.out_dir;
  fs::create_directories(dir);
  json files = json::array();
  for (std::size_t g = 0; g < groups.groups.size(); ++g) {
    std::vector<ResponseRecord> out;
    for (const auto& r : groups.groups[g]) {
      auto rec = r;
      rec.extra["reward"] = number_json(scores.at(key(r)));
      rec.extra["rank"] = g + 1;
      rec.extra["source_model"] = r.model;
      rec.model = r.model + "@rank" + std::to_string(g + 1);
      out.push_back(std::move(rec));
    }
    json m = meta;
    m["rank"] = g + 1;
    auto name = "group-" + std::to_string(g + 1) + ".jsonl";
    save_with_meta(Dataset::of(std::move(out)), dir / name, m);
    files.push_back(name);
  }
  if (!groups.baseline.empty()) {
    std::vector<ResponseRecord> out;
    for (const auto& r : groups.baseline) {
      auto rec = r;
      rec.extra["reward"] = number_json(scores.at(key(r)));
      out.push_back(std::move(rec));
    }
    json m = meta;
    m["rank"] = "baseline";
    save_with_meta(Dataset::of(std::move(out)), dir / "baseline.jsonl", m);
    files.push_back("baseline.jsonl");
  }
  write_file_atomic(dir / "score_distribution.json",
                    dump_pretty(reward::to_json(reward::score_distribution(all_scores, a.bin_width))));
  write_file_atomic(dir / "run.meta.json", dump_pretty(meta));
  return finish({{"command", "rerank"},
                 {"out_dir", a.out_dir},
                 {"questions", groups.questions.size()},
                 {"n", groups.n},
                 {"files", files}},
                0);
}

}  // namespace

void add_model_commands(CLI::App& app, Context& ctx, int& status) {
  {
    auto a = std::make_shared<TrainArgs>();
    auto* sub = app.add_subcommand("train-reward", "Fit the pairwise reward model on comparison data");
    sub->add_option("--comparisons", a->comparisons)->required()->check(CLI::ExistingFile);
    sub->add_option("--out", a->out, "Checkpoint path")->required();
    sub->add_option("--learning-rate", a->learning_rate)->capture_default_str();
    sub->add_option("--steps", a->steps)->capture_default_str();
    sub->add_option("--batch-size", a->batch_size, "0 = full batch")->capture_default_str();
    sub->add_option("--dim-bits", a->dim_bits, "Feature space is 2^bits")->capture_default_str();
    sub->add_option("--distribution", a->distribution, "Write the comparison score distribution here");
    sub->callback([&ctx, &status, a] { status = run_train(ctx, *a); });
  }
  {
    auto a = std::make_shared<RerankArgs>();
    auto* sub = app.add_subcommand("rerank", "Split sampled responses into rank groups by reward");
    sub->add_option("--model", a->model, "Reward checkpoint")->required()->check(CLI::ExistingFile);
    sub->add_option("--instances", a->instances)->required()->check(CLI::ExistingFile);
    sub->add_option("--responses", a->responses, "Response sets (repeatable)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out-dir", a->out_dir)->required();
    sub->add_option("--baseline-model", a->baseline_model, "Model tag kept out of the ranking");
    sub->add_option("--kind", a->kind)->capture_default_str();
    sub->add_option("--templates", a->templates);
    sub->add_option("--bin-width", a->bin_width, "Score histogram bin width")->capture_default_str();
    sub->callback([&ctx, &status, a] { status = run_rerank(ctx, *a); });
  }
}

}  // namespace ik::cli
