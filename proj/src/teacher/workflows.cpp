#include "instructkit/workflows.hpp"

#include <map>
#include <optional>

#include "instructkit/error.hpp"
#include "instructkit/parallel.hpp"
#include "instructkit/prompts.hpp"

namespace ik::teacher {

namespace {

const std::vector<InstructionInstance>& require_instructions(const Dataset& d) {
  if (d.kind != DatasetKind::instruction_following && d.kind != DatasetKind::benchmark) {
    throw SchemaError("teacher", std::string("expected an instruction dataset, got '") + to_string(d.kind) + "'");
  }
  return d.instances();
}

json base_provenance(const char* workflow, const DecodingConfig& config, const WorkflowOptions& options) {
  return json{{"workflow", workflow},
              {"source_model", config.model},
              {"decoding", to_json(config)},
              {"template_version", options.templates.version()}};
}

std::vector<Failure> collect_failures(const std::vector<std::optional<std::string>>& errors,
                                      const std::vector<std::string>& ids) {
  std::vector<Failure> out;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (errors[i]) out.push_back({ids[i], *errors[i]});
  }
  return out;
}

}  // namespace

AnswerResult generate_answers(const Dataset& instances, const DecodingConfig& config, Backend& backend,
                              const WorkflowOptions& options) {
  validate(config);
  const auto& records = require_instructions(instances);
  std::vector<InstructionInstance> out = records;
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!records[i].output || options.overwrite) todo.push_back(i);
  }
  std::vector<std::optional<std::string>> errors(todo.size());
  std::vector<std::string> ids(todo.size());
  parallel_for(todo.size(), options.workers, [&](std::size_t k) {
    const auto& rec = records[todo[k]];
    ids[k] = rec.id;
    try {
      ChatRequest req{render_prompt(rec, options.templates), config, options.templates.version(), 0};
      out[todo[k]] = rec.with_output(complete(req, backend, options.retry).text);
    } catch (const Error& e) {
      out[todo[k]] = rec.with_output(std::nullopt);
      errors[k] = e.what();
    }
  });
  AnswerResult result;
  result.requested = todo.size();
  result.failures = collect_failures(errors, ids);
  json prov = base_provenance("generate_answers", config, options);
  result.dataset = Dataset::of(instances.kind, std::move(out), std::move(prov));
  return result;
}

SampleResult sample_responses(const Dataset& instances, const DecodingConfig& config, Backend& backend,
                              std::size_t n, const std::string& model_tag, const WorkflowOptions& options) {
  validate(config);
  if (n == 0) throw ValidationError("teacher", "number of samples must be >= 1");
  const auto& records = require_instructions(instances);
  const std::size_t total = records.size() * n;
  std::vector<std::optional<ResponseRecord>> slots(total);
  std::vector<std::optional<std::string>> errors(total);
  std::vector<std::string> ids(total);
  parallel_for(total, options.workers, [&](std::size_t k) {
    const auto& rec = records[k / n];
    const auto index = static_cast<std::int64_t>(k % n);
    ids[k] = rec.id + "#" + std::to_string(index);
    try {
      ChatRequest req{render_prompt(rec, options.templates), config, options.templates.version(), index};
      slots[k] = ResponseRecord{rec.id, model_tag, index, complete(req, backend, options.retry).text, json::object()};
    } catch (const Error& e) {
      errors[k] = e.what();
    }
  });
  std::vector<ResponseRecord> out;
  for (auto& s : slots) {
    if (s) out.push_back(std::move(*s));
  }
  SampleResult result;
  result.failures = collect_failures(errors, ids);
  json prov = base_provenance("sample_responses", config, options);
  prov["samples_per_instance"] = n;
  prov["model_tag"] = model_tag;
  result.responses = Dataset::of(std::move(out), std::move(prov));
  return result;
}

TranslateResult translate_instructions(const Dataset& instances, const DecodingConfig& translator_config,
                                       Backend& backend, const WorkflowOptions& options) {
  validate(translator_config);
  const auto& records = require_instructions(instances);
  for (const auto& r : records) {
    if (r.language != Language::en) {
      throw ValidationError("teacher", "translation source must be English; record " + r.id + " is " +
                                           to_string(r.language));
    }
  }
  auto translate = [&](const std::string& s) {
    ChatRequest req{render_translation_prompt(s), translator_config, std::string(kTranslationPromptVersion), 0};
    return complete(req, backend, options.retry).text;
  };
  std::vector<std::optional<InstructionInstance>> slots(records.size());
  std::vector<std::optional<std::string>> errors(records.size());
  std::vector<std::string> ids(records.size());
  parallel_for(records.size(), options.workers, [&](std::size_t i) {
    const auto& rec = records[i];
    ids[i] = rec.id;
    try {
      std::string instruction = translate(rec.instruction);
      std::optional<std::string> input;
      if (rec.input) input = translate(*rec.input);
      json extra = rec.extra;
      extra["source_id"] = rec.id;
      slots[i] = InstructionInstance::create(std::move(instruction), std::move(input), std::nullopt, Language::zh,
                                             std::move(extra));
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });
  TranslateResult result;
  std::vector<InstructionInstance> out;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (!slots[i]) continue;
    result.id_map.emplace_back(records[i].id, slots[i]->id);
    out.push_back(std::move(*slots[i]));
  }
  result.failures = collect_failures(errors, ids);
  json prov = base_provenance("translate_instructions", translator_config, options);
  prov["translation_prompt_version"] = kTranslationPromptVersion;
  prov["language"] = "zh";
  result.dataset = Dataset::of(instances.kind, std::move(out), std::move(prov));
  return result;
}

ComparisonRecord collect_ratings(const std::string& prompt,
                                 const std::vector<std::pair<std::string, std::string>>& responses,
                                 const DecodingConfig& config, Backend& backend, const WorkflowOptions& options) {
  if (responses.empty()) throw ValidationError("teacher", "collect_ratings needs at least one response");
  std::vector<std::string> texts;
  for (const auto& [text, model] : responses) texts.push_back(text);

  std::string raw;
  std::optional<std::vector<double>> scores;
  std::string reason;
  for (bool strict : {false, true}) {
    ChatRequest req{render_rating_prompt(prompt, texts, strict), config, std::string(kRatingPromptVersion), 0};
    raw = complete(req, backend, options.retry).text;
    auto parsed = parse_scores(raw, texts.size());
    if (parsed.scores) {
      scores = std::move(parsed.scores);
      break;
    }
    reason = parsed.reason;
  }
  if (!scores) {
    throw ParseError("teacher", "could not parse " + std::to_string(texts.size()) +
                                    " scores from rating reply after reprompt: " + reason, raw);
  }
  ComparisonRecord rec;
  rec.prompt = prompt;
  for (std::size_t i = 0; i < responses.size(); ++i) {
    rec.responses.push_back(ScoredResponse{responses[i].first, responses[i].second, (*scores)[i], json::object()});
  }
  rec.raw = raw;
  rec.extra = json{{"rating_prompt_version", kRatingPromptVersion}};
  return rec;
}

RatingResult rate_dataset(const Dataset& instances, const std::vector<Dataset>& response_sets,
                          const DecodingConfig& config, Backend& backend, const WorkflowOptions& options) {
  const auto& records = require_instructions(instances);
  std::map<std::string, std::vector<const ResponseRecord*>> by_instance;
  for (const auto& set : response_sets) {
    for (const auto& r : set.responses()) by_instance[r.instance_id].push_back(&r);
  }
  std::vector<std::optional<ComparisonRecord>> slots(records.size());
  std::vector<std::optional<std::string>> errors(records.size());
  std::vector<std::string> ids(records.size());
  std::vector<char> skipped(records.size(), 0);
  parallel_for(records.size(), options.workers, [&](std::size_t i) {
    const auto& rec = records[i];
    ids[i] = rec.id;
    auto it = by_instance.find(rec.id);
    if (it == by_instance.end() || it->second.size() < 2) {
      skipped[i] = 1;
      return;
    }
    std::vector<std::pair<std::string, std::string>> candidates;
    for (const auto* r : it->second) candidates.emplace_back(r->text, r->model);
    try {
      auto cmp = collect_ratings(render_prompt(rec, options.templates), candidates, config, backend, options);
      cmp.extra["instance_id"] = rec.id;
      slots[i] = std::move(cmp);
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });
  RatingResult result;
  std::vector<ComparisonRecord> out;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    result.skipped += skipped[i];
    if (slots[i]) out.push_back(std::move(*slots[i]));
  }
  result.failures = collect_failures(errors, ids);
  json prov = base_provenance("collect_ratings", config, options);
  prov["rating_prompt_version"] = kRatingPromptVersion;
  result.comparisons = Dataset::of(std::move(out), std::move(prov));
  return result;
}

}  // namespace ik::teacher
