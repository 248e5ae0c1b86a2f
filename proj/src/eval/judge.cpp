#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "instructkit/error.hpp"
#include "instructkit/eval.hpp"
#include "instructkit/hashing.hpp"
#include "instructkit/parallel.hpp"
#include "instructkit/prompts.hpp"

namespace ik::eval {

void validate(const JudgeVerdict& v) {
  if (v.question_id.empty()) throw ValidationError("eval", "verdict without question_id");
  if (!score_in_range(v.score_a) || !score_in_range(v.score_b)) {
    throw ValidationError("eval", "verdict " + v.question_id + ": score ∈ [1,10] violated");
  }
}

json to_json(const JudgeVerdict& v) {
  return {{"question_id", v.question_id}, {"model_a", v.model_a}, {"model_b", v.model_b},
          {"score_a", number_json(v.score_a)}, {"score_b", number_json(v.score_b)}, {"raw", v.raw},
          {"prompt_version", v.prompt_version}, {"swapped", v.swapped}};
}

JudgeVerdict verdict_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("eval", "verdict must be a JSON object");
  JudgeVerdict v;
  try {
    v.question_id = j.at("question_id").is_string() ? j["question_id"].get<std::string>() : j["question_id"].dump();
    v.model_a = j.at("model_a").get<std::string>();
    v.model_b = j.at("model_b").get<std::string>();
    v.score_a = j.at("score_a").get<double>();
    v.score_b = j.at("score_b").get<double>();
    v.raw = j.value("raw", "");
    v.prompt_version = j.value("prompt_version", "");
    v.swapped = j.value("swapped", false);
  } catch (const json::exception& e) {
    throw SchemaError("eval", std::string("bad verdict: ") + e.what());
  }
  validate(v);
  return v;
}

std::vector<JudgeVerdict> load_verdicts(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::vector<JudgeVerdict> out;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(verdict_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw SchemaError("eval", path.string() + ": line " + std::to_string(n) + ": " + e.what());
    } catch (const Error& e) {
      throw SchemaError("eval", path.string() + ": line " + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

void save_verdicts(const std::vector<JudgeVerdict>& verdicts, const std::filesystem::path& path) {
  std::string out;
  for (const auto& v : verdicts) out += to_json(v).dump() + "\n";
  write_file_atomic(path, out);
}

bool swap_for(std::string_view question_id, std::uint64_t seed) { return (hash64(question_id, seed) >> 17) & 1; }

JudgeVerdict judge_pair(const std::string& question_id, std::string_view question, std::string_view answer_a,
                        std::string_view answer_b, const std::string& model_a, const std::string& model_b,
                        const teacher::DecodingConfig& config, teacher::Backend& backend, bool swap,
                        const teacher::RetryPolicy& retry) {
  const auto first = swap ? answer_b : answer_a;
  const auto second = swap ? answer_a : answer_b;
  std::string raw, reason;
  for (bool strict : {false, true}) {
    teacher::ChatRequest req{teacher::render_judge_prompt(question, first, second, strict), config,
                             std::string(teacher::kJudgePromptVersion), 0};
    raw = teacher::complete(req, backend, retry).text;
    auto parsed = teacher::parse_scores(raw, 2);
    if (parsed.scores) {
      const auto& s = *parsed.scores;
      JudgeVerdict v{question_id, model_a, model_b, swap ? s[1] : s[0], swap ? s[0] : s[1], raw,
                     std::string(teacher::kJudgePromptVersion), swap};
      return v;
    }
    reason = parsed.reason;
  }
  throw ParseError("eval", "judge reply for " + question_id + " has no two scores after reprompt: " + reason, raw);
}

JudgeRun judge_all(const std::vector<InstructionInstance>& questions, const std::vector<ResponseRecord>& answers_a,
                   const std::vector<ResponseRecord>& answers_b, const teacher::DecodingConfig& config,
                   teacher::Backend& backend, const JudgeOptions& options) {
  auto index = [](const std::vector<ResponseRecord>& rs) {
    std::map<std::string, const ResponseRecord*> m;
    for (const auto& r : rs) {
      auto& slot = m[r.instance_id];
      if (!slot || r.decode_index < slot->decode_index) slot = &r;
    }
    return m;
  };
  const auto a = index(answers_a), b = index(answers_b);
  std::vector<const InstructionInstance*> todo;
  for (const auto& q : questions) {
    if (a.count(q.id) && b.count(q.id)) todo.push_back(&q);
  }
  std::vector<std::optional<JudgeVerdict>> slots(todo.size());
  std::vector<std::optional<std::string>> errors(todo.size());
  parallel_for(todo.size(), options.workers, [&](std::size_t i) {
    const auto& q = *todo[i];
    const auto& ra = *a.at(q.id);
    const auto& rb = *b.at(q.id);
    const bool swap = options.randomize_positions && swap_for(q.id, options.seed);
    try {
      slots[i] = judge_pair(q.id, question_text(q), ra.text, rb.text, ra.model, rb.model, config, backend, swap,
                            options.retry);
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });
  JudgeRun run;
  for (std::size_t i = 0; i < todo.size(); ++i) {
    if (slots[i]) run.verdicts.push_back(std::move(*slots[i]));
    if (errors[i]) run.failures.emplace_back(todo[i]->id, *errors[i]);
  }
  return run;
}

RelativeScoreReport relative_score(const std::vector<JudgeVerdict>& verdicts) {
  if (verdicts.empty()) throw ValidationError("eval", "relative score needs at least one verdict");
  RelativeScoreReport r;
  r.model = verdicts.front().model_a;
  r.opponent = verdicts.front().model_b;
  std::set<std::string> seen;
  std::string dups;
  for (const auto& v : verdicts) {
    validate(v);
    if (v.model_a != r.model || v.model_b != r.opponent) {
      throw ValidationError("eval", "verdicts mix model pairs: (" + r.model + ", " + r.opponent + ") and (" +
                                        v.model_a + ", " + v.model_b + ")");
    }
    if (!seen.insert(v.question_id).second) dups += (dups.empty() ? "" : ", ") + v.question_id;
    r.sum_model += v.score_a;
    r.sum_opponent += v.score_b;
  }
  if (!dups.empty()) throw ValidationError("eval", "duplicate question ids: " + dups);
  r.n_questions = verdicts.size();
  r.max_sum = kMaxScore * static_cast<double>(r.n_questions);
  if (r.sum_opponent > 0) r.relative_percent = 100.0 * r.sum_model / r.sum_opponent;
  return r;
}

json to_json(const RelativeScoreReport& r) {
  json j = {{"model", r.model},
            {"opponent", r.opponent},
            {"sum_model", number_json(r.sum_model)},
            {"sum_opponent", number_json(r.sum_opponent)},
            {"n_questions", r.n_questions},
            {"max_sum", number_json(r.max_sum)},
            {"relative_percent", nullptr}};
  if (r.relative_percent) j["relative_percent"] = *r.relative_percent;
  return j;
}

}  // namespace ik::eval
