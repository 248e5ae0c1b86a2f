#include <fstream>

#include "commands.hpp"
#include "instructkit/corpus_stats.hpp"
#include "instructkit/error.hpp"
#include "instructkit/teacher.hpp"

namespace ik::cli {

namespace {

struct GenerateArgs {
  std::string in, out, kind = "instruction", responses_out, model_tag;
  std::optional<std::string> templates;
  std::size_t samples = 0;
  bool overwrite = false;
};

int run_generate(Context& ctx, const GenerateArgs& a) {
  ctx.resolve();
  auto backend = ctx.make_backend();
  auto options = ctx.workflow_options(a.templates);
  options.overwrite = a.overwrite;
  auto instances = load_instances(a.in, a.kind);

  json meta = ctx.run_meta("generate", {{"instances", a.in}}, &options.templates);
  meta["source_model"] = ctx.decoding().model;
  meta["decoding"] = teacher::to_json(ctx.decoding());

  auto result = teacher::generate_answers(instances, ctx.decoding(), *backend, options);
  json m = meta;
  m["failures"] = failures_json(result.failures);
  save_with_meta(result.dataset, a.out, m);

  json summary = {{"command", "generate"},
                  {"out", a.out},
                  {"records", result.dataset.size()},
                  {"requested", result.requested},
                  {"failures", result.failures.size()}};
  std::size_t failures = result.failures.size();

  if (a.samples > 0) {
    if (a.responses_out.empty()) throw ValidationError("cli", "--samples needs --responses-out");
    const std::string tag = a.model_tag.empty() ? ctx.decoding().model : a.model_tag;
    auto sampled = teacher::sample_responses(instances, ctx.decoding(), *backend, a.samples, tag, options);
    json sm = meta;
    sm["source_model"] = tag;
    sm["samples"] = a.samples;
    sm["failures"] = failures_json(sampled.failures);
    save_with_meta(sampled.responses, a.responses_out, sm);
    summary["responses_out"] = a.responses_out;
    summary["responses"] = sampled.responses.size();
    summary["sample_failures"] = sampled.failures.size();
    failures += sampled.failures.size();
  }
  return finish(summary, failures);
}

struct TranslateArgs {
  std::string in, out, id_map, kind = "instruction";
  std::optional<std::string> translator_model;
};

int run_translate(Context& ctx, const TranslateArgs& a) {
  ctx.resolve();
  auto backend = ctx.make_backend();
  auto options = ctx.workflow_options();
  auto instances = load_instances(a.in, a.kind);
  auto config = ctx.decoding();
  config.model = ctx.setting("translator_model", a.translator_model, "INSTRUCTKIT_TRANSLATOR_MODEL", "gpt-3.5-turbo");

  auto result = teacher::translate_instructions(instances, config, *backend, options);
  json meta = ctx.run_meta("translate", {{"instances", a.in}});
  meta["translator"] = teacher::to_json(config);
  meta["failures"] = failures_json(result.failures);
  save_with_meta(result.dataset, a.out, meta);

  if (!a.id_map.empty()) {
    std::string body = "source_id\ttranslated_id\n";
    for (const auto& [src, dst] : result.id_map) body += src + "\t" + dst + "\n";
    save_text(a.id_map, body, meta);
  }
  return finish({{"command", "translate"},
                 {"out", a.out},
                 {"records", result.dataset.size()},
                 {"failures", result.failures.size()}},
                result.failures.size());
}

struct RateArgs {
  std::string instances, out, kind = "instruction";
  std::vector<std::string> responses;
  std::optional<std::string> templates;
};

int run_rate(Context& ctx, const RateArgs& a) {
  ctx.resolve();
  auto backend = ctx.make_backend();
  auto options = ctx.workflow_options(a.templates);
  auto instances = load_instances(a.instances, a.kind);
  std::vector<Dataset> sets;
  std::map<std::string, fs::path> inputs = {{"instances", a.instances}};
  for (std::size_t i = 0; i < a.responses.size(); ++i) {
    auto set = load_answers(a.responses[i]);
    sets.push_back(Dataset::of(std::move(set.records)));
    inputs["responses_" + std::to_string(i + 1)] = a.responses[i];
  }
  auto result = teacher::rate_dataset(instances, sets, ctx.decoding(), *backend, options);
  json meta = ctx.run_meta("rate", inputs, &options.templates);
  meta["rater"] = teacher::to_json(ctx.decoding());
  meta["failures"] = failures_json(result.failures);
  meta["skipped"] = result.skipped;
  save_with_meta(result.comparisons, a.out, meta);
  return finish({{"command", "rate"},
                 {"out", a.out},
                 {"records", result.comparisons.size()},
                 {"skipped", result.skipped},
                 {"failures", result.failures.size()}},
                result.failures.size());
}

struct StatsArgs {
  std::string in, out_dir, scope = "first", unit = "mixed", tagger = "rule";
  std::size_t min_frequency = stats::kDefaultMinFrequency;
  std::size_t top_k = stats::kDefaultTopK;
  std::size_t bin_width = 1;
};

int run_stats(Context& ctx, const StatsArgs& a) {
  ctx.resolve();
  std::vector<std::string> texts;
  {
    auto set = load_answers(a.in);
    for (auto& r : set.records) texts.push_back(std::move(r.text));
  }
  if (a.scope != "first" && a.scope != "all") throw ValidationError("cli", "--scope must be first or all");
  const auto scope = a.scope == "first" ? stats::SentenceScope::first : stats::SentenceScope::all;
  std::unique_ptr<stats::Tagger> tagger;
  if (a.tagger == "rule") tagger = std::make_unique<stats::RuleTagger>();
  else if (a.tagger == "pretagged") tagger = std::make_unique<stats::PretaggedTagger>();
  else throw ValidationError("cli", "--tagger must be rule or pretagged");
  const auto unit = text::token_unit_from_string(a.unit);

  auto counts = stats::count_pairs(texts, *tagger, scope, ctx.workers());
  auto kept = stats::sorted_pairs(counts, a.min_frequency);
  auto top = stats::top_k_pairs(stats::sorted_pairs(counts, 1), a.top_k);
  auto lengths = stats::length_distribution(texts, unit, a.bin_width);

  json meta = ctx.run_meta("stats", {{"responses", a.in}});
  meta["tagger"] = tagger->version();
  meta["scope"] = a.scope;
  meta["min_frequency"] = a.min_frequency;
  meta["top_k"] = a.top_k;
  meta["unit"] = a.unit;
  meta["responses"] = texts.size();

  const fs::path dir = a.out_dir;
  fs::create_directories(dir);
  write_file_atomic(dir / "pairs.tsv", stats::pair_table_tsv(kept));
  write_file_atomic(dir / "top_pairs.tsv", stats::pair_table_tsv(top));
  write_file_atomic(dir / "sunburst.json", dump_pretty(stats::sunburst_export(kept)));
  write_file_atomic(dir / "lengths.json", dump_pretty(stats::to_json(lengths)));
  write_file_atomic(dir / "run.meta.json", dump_pretty(meta));

  std::size_t extracted = 0;
  for (const auto& [_, n] : counts) extracted += n;
  return finish({{"command", "stats"},
                 {"out_dir", a.out_dir},
                 {"responses", texts.size()},
                 {"extracted", extracted},
                 {"distinct_pairs", counts.size()},
                 {"pairs_kept", kept.size()}},
                0);
}

}  // namespace

void add_data_commands(CLI::App& app, Context& ctx, int& status) {
  {
    auto a = std::make_shared<GenerateArgs>();
    auto* sub = app.add_subcommand("generate", "Fill missing outputs with teacher answers");
    sub->add_option("--in", a->in, "Instruction dataset (JSONL)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", a->out, "Output dataset")->required();
    sub->add_option("--kind", a->kind, "instruction or benchmark")->capture_default_str();
    sub->add_option("--templates", a->templates, "Prompt templates JSON");
    sub->add_flag("--overwrite", a->overwrite, "Regenerate existing outputs");
    sub->add_option("--samples", a->samples, "Also draw N answers per instance");
    sub->add_option("--responses-out", a->responses_out, "Response set for --samples");
    sub->add_option("--model-tag", a->model_tag, "Model tag on sampled responses (default: --model)");
    sub->callback([&ctx, &status, a] { status = run_generate(ctx, *a); });
  }
  {
    auto a = std::make_shared<TranslateArgs>();
    auto* sub = app.add_subcommand("translate", "Translate instructions and inputs into Chinese");
    sub->add_option("--in", a->in)->required()->check(CLI::ExistingFile);
    sub->add_option("--out", a->out)->required();
    sub->add_option("--kind", a->kind)->capture_default_str();
    sub->add_option("--id-map", a->id_map, "Write source -> translated id table (TSV)");
    sub->add_option("--translator-model", a->translator_model, "Model used for translation");
    sub->callback([&ctx, &status, a] { status = run_translate(ctx, *a); });
  }
  {
    auto a = std::make_shared<RateArgs>();
    auto* sub = app.add_subcommand("rate", "Collect 1-10 teacher ratings for candidate responses");
    sub->add_option("--instances", a->instances)->required()->check(CLI::ExistingFile);
    sub->add_option("--responses", a->responses, "Response sets (repeatable)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", a->out, "Comparison dataset")->required();
    sub->add_option("--kind", a->kind)->capture_default_str();
    sub->add_option("--templates", a->templates);
    sub->callback([&ctx, &status, a] { status = run_rate(ctx, *a); });
  }
  {
    auto a = std::make_shared<StatsArgs>();
    auto* sub = app.add_subcommand("stats", "Verb-noun and length statistics of responses");
    sub->add_option("--in,--responses", a->in, "Dataset with outputs, or a response set")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out-dir", a->out_dir)->required();
    sub->add_option("--min-frequency", a->min_frequency)->capture_default_str();
    sub->add_option("--top-k", a->top_k)->capture_default_str();
    sub->add_option("--scope", a->scope, "first or all sentences")->capture_default_str();
    sub->add_option("--unit", a->unit, "Length unit: whitespace, codepoint or mixed")->capture_default_str();
    sub->add_option("--bin-width", a->bin_width)->capture_default_str();
    sub->add_option("--tagger", a->tagger, "rule or pretagged")->capture_default_str();
    sub->callback([&ctx, &status, a] { status = run_stats(ctx, *a); });
  }
}

}  // namespace ik::cli
