#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "instructkit/dataset.hpp"
#include "instructkit/teacher.hpp"
#include "instructkit/text.hpp"

namespace ik::eval {

// ---- LLM judge ------------------------------------------------------------

struct JudgeVerdict {
  std::string question_id;
  std::string model_a;
  std::string model_b;
  double score_a = 0.0;
  double score_b = 0.0;
  std::string raw;
  std::string prompt_version;
  bool swapped = false;  // answers were shown b-first

  friend bool operator==(const JudgeVerdict&, const JudgeVerdict&) = default;
};

void validate(const JudgeVerdict& v);
json to_json(const JudgeVerdict& v);
JudgeVerdict verdict_from_json(const json& j);
std::vector<JudgeVerdict> load_verdicts(const std::filesystem::path& path);
void save_verdicts(const std::vector<JudgeVerdict>& verdicts, const std::filesystem::path& path);

/// Scores answer_a and answer_b. With `swap` the judge sees b first and the
/// parsed scores are mapped back. One strict reprompt on an unparseable
/// reply, then ParseError carrying the reply.
JudgeVerdict judge_pair(const std::string& question_id, std::string_view question, std::string_view answer_a,
                        std::string_view answer_b, const std::string& model_a, const std::string& model_b,
                        const teacher::DecodingConfig& config, teacher::Backend& backend, bool swap = false,
                        const teacher::RetryPolicy& retry = {});

/// Seeded per-question coin for position randomisation.
bool swap_for(std::string_view question_id, std::uint64_t seed);

struct JudgeOptions {
  bool randomize_positions = true;
  std::uint64_t seed = 0;
  teacher::RetryPolicy retry;
  std::size_t workers = 4;
};

struct JudgeRun {
  std::vector<JudgeVerdict> verdicts;  // question order
  std::vector<std::pair<std::string, std::string>> failures;  // (question id, message)
};

/// Judges every question that both response sets answer. Each set must hold
/// at most one response per question; the lowest decode_index is used.
JudgeRun judge_all(const std::vector<InstructionInstance>& questions, const std::vector<ResponseRecord>& answers_a,
                   const std::vector<ResponseRecord>& answers_b, const teacher::DecodingConfig& config,
                   teacher::Backend& backend, const JudgeOptions& options = {});

struct RelativeScoreReport {
  std::string model;
  std::string opponent;
  double sum_model = 0.0;
  double sum_opponent = 0.0;
  std::size_t n_questions = 0;
  double max_sum = 0.0;  // 10 per question
  std::optional<double> relative_percent;  // absent when sum_opponent is 0
};

/// model = the a side of every verdict.
RelativeScoreReport relative_score(const std::vector<JudgeVerdict>& verdicts);
json to_json(const RelativeScoreReport& r);

// ---- ROUGE-L ----------------------------------------------------------------

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b);

/// LCS F-measure: P = lcs/|cand|, R = lcs/|ref|, F = (1+b^2)PR / (R + b^2 P).
/// 0 when either side is empty or nothing matches.
double rouge_l(std::string_view candidate, std::string_view reference, double beta = 1.0,
               text::TokenUnit unit = text::TokenUnit::mixed);

struct RougeItem {
  std::string id;
  std::string candidate;
  std::string reference;
};

struct ModelItems {
  std::string model;
  std::vector<RougeItem> items;
};

inline const std::vector<std::size_t> kDefaultBucketEdges = {3, 6, 10};

struct BucketStats {
  std::size_t lo = 0;
  std::optional<std::size_t> hi;  // inclusive; absent for the open last bucket
  std::size_t count = 0;
  std::map<std::string, double> mean;               // per model; absent when count is 0
  std::map<std::string, double> diff_vs_reference;  // model mean - reference mean

  std::string label() const;
};

struct RougeBucketReport {
  std::vector<std::size_t> edges;
  std::vector<BucketStats> buckets;
  std::map<std::string, double> overall;
  std::map<std::string, double> overall_diff;
  std::string reference_model;
  double beta = 1.0;
  text::TokenUnit unit = text::TokenUnit::mixed;
  std::size_t items = 0;
};

/// Item i goes to the first bucket whose edge is >= its reference length,
/// else to the last one; k edges give k + 1 buckets. Every model must cover
/// the same (id, reference) set.
RougeBucketReport bucket_rouge(const std::vector<ModelItems>& models,
                               const std::vector<std::size_t>& edges = kDefaultBucketEdges,
                               const std::string& reference_model = "", double beta = 1.0,
                               text::TokenUnit unit = text::TokenUnit::mixed, std::size_t workers = 1);
json to_json(const RougeBucketReport& r);

/// Seeded uniform sample of k indices out of n, ascending. k >= n keeps all.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, std::uint64_t seed);

// ---- HHH votes --------------------------------------------------------------

enum class Criterion { helpfulness, honesty, harmlessness };
enum class Option { a_strong, a_weak, tie, b_weak, b_strong };

inline constexpr Criterion kCriteria[] = {Criterion::helpfulness, Criterion::honesty, Criterion::harmlessness};
inline constexpr Option kOptions[] = {Option::a_strong, Option::a_weak, Option::tie, Option::b_weak,
                                      Option::b_strong};

const char* to_string(Criterion c);
const char* to_string(Option o);
Criterion criterion_from_string(std::string_view s);  // ValidationError when unknown
Option option_from_string(std::string_view s);
/// Mirror image: a-strong <-> b-strong, a-weak <-> b-weak.
Option flip(Option o);

/// One annotator's choices on one task, with sides in canonical (model_a,
/// model_b) orientation.
struct HhhVote {
  std::string task_id;
  std::string annotator;
  std::string model_a;
  std::string model_b;
  std::map<Criterion, Option> choices;
  std::int64_t sequence = 0;  // position in the service's vote log
  std::int64_t timestamp_ms = 0;

  friend bool operator==(const HhhVote&, const HhhVote&) = default;
};

json to_json(const HhhVote& v);
HhhVote vote_from_json(const json& j);
std::vector<HhhVote> load_votes(const std::filesystem::path& path);

struct HhhTally {
  Criterion criterion = Criterion::helpfulness;
  std::string model_a;
  std::string model_b;
  std::size_t a_wins = 0;
  std::size_t ties = 0;
  std::size_t b_wins = 0;

  std::size_t total() const { return a_wins + ties + b_wins; }
  double a_fraction() const;
  double tie_fraction() const;
  double b_fraction() const;
};

/// Merges the two a-leaning and the two b-leaning options. Criteria nobody
/// voted on are left out.
std::vector<HhhTally> tally_hhh(const std::vector<HhhVote>& votes);
json to_json(const HhhTally& t);

}  // namespace ik::eval
