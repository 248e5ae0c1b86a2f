#include <set>
#include <sstream>

#include "commands.hpp"
#include "instructkit/error.hpp"
#include "instructkit/eval.hpp"

namespace ik::cli {

namespace {

struct JudgeArgs {
  std::string questions, model_a, model_b, name_a, name_b, out, report;
  bool no_randomize = false;
  std::optional<std::string> judge_model;
};

int run_judge(Context& ctx, const JudgeArgs& a) {
  ctx.resolve();
  auto backend = ctx.make_backend();
  auto questions = load_dataset(a.questions, DatasetKind::benchmark);
  auto set_a = load_answers(a.model_a, a.name_a);
  auto set_b = load_answers(a.model_b, a.name_b);
  if (set_a.name == set_b.name) {
    throw ValidationError("cli", "both sides are named '" + set_a.name + "'; pass --name-a/--name-b");
  }
  for (auto& r : set_a.records) r.model = set_a.name;
  for (auto& r : set_b.records) r.model = set_b.name;

  auto config = ctx.decoding();
  config.model = ctx.setting("judge_model", a.judge_model, "INSTRUCTKIT_JUDGE_MODEL", config.model);
  eval::JudgeOptions opts;
  opts.randomize_positions = !a.no_randomize;
  opts.seed = ctx.seed();
  opts.workers = ctx.workers();

  std::size_t unmatched = 0;
  {
    auto ia = one_per_instance(set_a.records), ib = one_per_instance(set_b.records);
    for (const auto& q : questions.instances()) unmatched += !(ia.count(q.id) && ib.count(q.id));
  }
  auto run = eval::judge_all(questions.instances(), set_a.records, set_b.records, config, *backend, opts);

  json meta = ctx.run_meta("judge", {{"questions", a.questions}, {"answers_a", a.model_a}, {"answers_b", a.model_b}});
  meta["judge"] = teacher::to_json(config);
  meta["model_a"] = set_a.name;
  meta["model_b"] = set_b.name;
  meta["randomize_positions"] = opts.randomize_positions;
  json failures = json::array();
  for (const auto& [id, msg] : run.failures) failures.push_back({{"id", id}, {"error", msg}});
  meta["failures"] = failures;

  if (fs::path(a.out).has_parent_path()) fs::create_directories(fs::path(a.out).parent_path());
  eval::save_verdicts(run.verdicts, a.out);
  write_meta(a.out, meta);

  json summary = {{"command", "judge"},
                  {"out", a.out},
                  {"verdicts", run.verdicts.size()},
                  {"unmatched_questions", unmatched},
                  {"failures", run.failures.size()}};
  if (!run.verdicts.empty()) {
    auto rep = eval::relative_score(run.verdicts);
    auto rj = eval::to_json(rep);
    summary["relative_percent"] = rj["relative_percent"];
    if (!a.report.empty()) save_json(a.report, rj, meta);
  }
  return finish(summary, run.failures.size());
}

struct RougeArgs {
  std::vector<std::string> candidates;
  std::string references, out, reference_model, unit = "mixed", edges = "3,6,10";
  double beta = 1.0;
  std::size_t sample = 0;
};

std::vector<std::size_t> parse_edges(const std::string& s) {
  std::vector<std::size_t> edges;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      long long v = std::stoll(part, &used);
      if (used != part.size() || v < 0) throw std::invalid_argument(part);
      edges.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw ValidationError("cli", "--edges: '" + part + "' is not a non-negative integer");
    }
  }
  return edges;
}

int run_rouge(Context& ctx, const RougeArgs& a) {
  ctx.resolve();
  auto refs = load_answers(a.references);
  auto ref_by_id = one_per_instance(refs.records);
  std::map<std::string, fs::path> inputs = {{"references", a.references}};

  std::vector<std::pair<std::string, std::map<std::string, const ResponseRecord*>>> cands;
  std::vector<AnswerSet> sets;
  sets.reserve(a.candidates.size());
  for (const auto& spec : a.candidates) {
    auto eq = spec.find('=');
    std::string name = eq == std::string::npos ? "" : spec.substr(0, eq);
    std::string path = eq == std::string::npos ? spec : spec.substr(eq + 1);
    if (!fs::exists(path)) throw IoError("cli", path + ": no such file");
    sets.push_back(load_answers(path, name));
    inputs["candidates_" + sets.back().name] = path;
  }
  std::set<std::string> names;
  for (const auto& s : sets) {
    if (!names.insert(s.name).second) throw ValidationError("cli", "candidate name '" + s.name + "' used twice");
  }

  // items every model and the reference cover, in reference order
  std::vector<std::string> ids;
  std::vector<std::map<std::string, const ResponseRecord*>> idx;
  for (const auto& s : sets) idx.push_back(one_per_instance(s.records));
  for (const auto& [id, _] : ref_by_id) {
    bool all = true;
    for (const auto& m : idx) all = all && m.count(id);
    if (all) ids.push_back(id);
  }
  if (ids.empty()) throw ValidationError("eval", "no item is covered by every candidate set and the references");
  std::vector<std::string> chosen;
  for (auto i : eval::sample_indices(ids.size(), a.sample ? a.sample : ids.size(), ctx.seed())) {
    chosen.push_back(ids[i]);
  }

  std::vector<eval::ModelItems> models;
  for (std::size_t s = 0; s < sets.size(); ++s) {
    eval::ModelItems mi{sets[s].name, {}};
    for (const auto& id : chosen) mi.items.push_back({id, idx[s].at(id)->text, ref_by_id.at(id)->text});
    models.push_back(std::move(mi));
  }
  auto report = eval::bucket_rouge(models, parse_edges(a.edges), a.reference_model, a.beta,
                                   text::token_unit_from_string(a.unit), ctx.workers());
  json meta = ctx.run_meta("rouge", inputs);
  meta["sample"] = a.sample;
  meta["items_available"] = ids.size();
  save_json(a.out, eval::to_json(report), meta);
  return finish({{"command", "rouge"}, {"out", a.out}, {"items", report.items}, {"overall", report.overall}}, 0);
}

struct TallyArgs {
  std::string votes, out;
};

int run_tally(Context& ctx, const TallyArgs& a) {
  ctx.resolve();
  auto votes = eval::load_votes(a.votes);
  auto tallies = eval::tally_hhh(votes);
  json arr = json::array();
  for (const auto& t : tallies) arr.push_back(eval::to_json(t));
  json meta = ctx.run_meta("tally", {{"votes", a.votes}});
  save_json(a.out, arr, meta);
  return finish({{"command", "tally"}, {"out", a.out}, {"votes", votes.size()}, {"criteria", tallies.size()}}, 0);
}

}  // namespace

void add_eval_commands(CLI::App& app, Context& ctx, int& status) {
  {
    auto a = std::make_shared<JudgeArgs>();
    auto* sub = app.add_subcommand("judge", "Score two answer sets with the teacher as judge");
    sub->add_option("--questions", a->questions, "Benchmark questions")->required()->check(CLI::ExistingFile);
    sub->add_option("--model-a", a->model_a, "Answers of the evaluated model")->required()->check(CLI::ExistingFile);
    sub->add_option("--model-b", a->model_b, "Answers of the opponent")->required()->check(CLI::ExistingFile);
    sub->add_option("--name-a", a->name_a);
    sub->add_option("--name-b", a->name_b);
    sub->add_option("--out", a->out, "Verdicts (JSONL)")->required();
    sub->add_option("--report", a->report, "Relative score report (JSON)");
    sub->add_option("--judge-model", a->judge_model, "Teacher used as judge (default: --model)");
    sub->add_flag("--no-randomize", a->no_randomize, "Always show model-a first");
    sub->callback([&ctx, &status, a] { status = run_judge(ctx, *a); });
  }
  {
    auto a = std::make_shared<RougeArgs>();
    auto* sub = app.add_subcommand("rouge", "ROUGE-L against references, bucketed by reference length");
    sub->add_option("--candidates", a->candidates, "[name=]path, repeatable")->required();
    sub->add_option("--references", a->references)->required()->check(CLI::ExistingFile);
    sub->add_option("--out", a->out)->required();
    sub->add_option("--edges", a->edges, "Comma-separated inclusive bucket upper edges")->capture_default_str();
    sub->add_option("--reference-model", a->reference_model, "Model the differences are taken against");
    sub->add_option("--beta", a->beta)->capture_default_str();
    sub->add_option("--unit", a->unit)->capture_default_str();
    sub->add_option("--sample", a->sample, "Evaluate a seeded random subset of this size");
    sub->callback([&ctx, &status, a] { status = run_rouge(ctx, *a); });
  }
  {
    auto a = std::make_shared<TallyArgs>();
    auto* sub = app.add_subcommand("tally", "Win/tie/lose fractions from exported votes");
    sub->add_option("--votes", a->votes)->required()->check(CLI::ExistingFile);
    sub->add_option("--out", a->out)->required();
    sub->callback([&ctx, &status, a] { status = run_tally(ctx, *a); });
  }
}

}  // namespace ik::cli
