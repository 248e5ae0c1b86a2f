#pragma once

#include <string>
#include <utility>
#include <vector>

#include "instructkit/dataset.hpp"
#include "instructkit/teacher.hpp"

namespace ik::teacher {

struct WorkflowOptions {
  TemplateSet templates = TemplateSet::alpaca();
  RetryPolicy retry;
  std::size_t workers = 4;
  bool overwrite = false;  // regenerate outputs that already exist
};

struct Failure {
  std::string id;
  std::string message;
};

struct AnswerResult {
  Dataset dataset;
  std::vector<Failure> failures;
  std::size_t requested = 0;  // records that needed a call
};

/// Fills every missing output with one teacher answer. Failed records keep an
/// absent output and are listed in `failures`; the pass always completes.
AnswerResult generate_answers(const Dataset& instances, const DecodingConfig& config, Backend& backend,
                              const WorkflowOptions& options = {});

struct SampleResult {
  Dataset responses;  // response_set, ordered by (instance, decode_index)
  std::vector<Failure> failures;
};

/// Draws `n` answers per instance (decode_index 0..n-1) for best-of-n reranking.
/// Draw 0 is the same request generate_answers makes.
SampleResult sample_responses(const Dataset& instances, const DecodingConfig& config, Backend& backend,
                              std::size_t n, const std::string& model_tag, const WorkflowOptions& options = {});

struct TranslateResult {
  Dataset dataset;                                    // language zh, outputs dropped
  std::vector<std::pair<std::string, std::string>>   // source id -> translated id
      id_map;
  std::vector<Failure> failures;
};

TranslateResult translate_instructions(const Dataset& instances, const DecodingConfig& translator_config,
                                       Backend& backend, const WorkflowOptions& options = {});

/// Asks the teacher to score every candidate 1-10. One strict reprompt if the
/// reply does not yield exactly K valid scores; then ParseError with the raw
/// reply. With a single candidate the result is a self-rating, which the
/// comparison dataset schema (K >= 2) does not accept.
ComparisonRecord collect_ratings(const std::string& prompt,
                                 const std::vector<std::pair<std::string, std::string>>& responses,
                                 const DecodingConfig& config, Backend& backend, const WorkflowOptions& options = {});

struct RatingResult {
  Dataset comparisons;
  std::vector<Failure> failures;
  std::size_t skipped = 0;  // instances with fewer than two candidates
};

/// collect_ratings over every instance, with the candidates drawn from the
/// given response sets (matched by instance id). The prompt is the rendered
/// instruction prompt.
RatingResult rate_dataset(const Dataset& instances, const std::vector<Dataset>& response_sets,
                          const DecodingConfig& config, Backend& backend, const WorkflowOptions& options = {});

}  // namespace ik::teacher
