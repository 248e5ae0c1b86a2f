#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "instructkit/dataset.hpp"
#include "instructkit/eval.hpp"

namespace ik::annotation {

// Server-side task. answer_a/answer_b and model_a/model_b are canonical (as
// given to create_tasks); `swapped` says whether annotators see b on the left.
struct AnnotationTask {
  std::string task_id;
  std::string instance_id;
  std::string instruction;
  std::optional<std::string> input;
  std::string answer_a;
  std::string answer_b;
  std::string model_a;
  std::string model_b;
  bool swapped = false;
  std::size_t target_votes = 1;

  friend bool operator==(const AnnotationTask&, const AnnotationTask&) = default;
};

json to_json(const AnnotationTask& t);
AnnotationTask task_from_json(const json& j);

/// What an annotator receives. Carries no model identity.
struct TaskView {
  std::string task_id;
  std::string instruction;
  std::optional<std::string> input;
  std::string answer_a;  // as displayed
  std::string answer_b;
};

json to_json(const TaskView& v);
TaskView annotator_view(const AnnotationTask& t);

/// One task per instance, answers matched by instance id (lowest
/// decode_index when a set holds several). Side order is a seeded coin per
/// task. Missing responses are reported together.
std::vector<AnnotationTask> create_tasks(const std::vector<InstructionInstance>& instances,
                                         const std::vector<ResponseRecord>& responses_a,
                                         const std::vector<ResponseRecord>& responses_b, std::uint64_t seed,
                                         std::size_t target_votes = 1);

struct VoteSubmission {
  std::string task_id;
  std::string annotator;
  std::map<std::string, std::string> choices;  // criterion -> option, in displayed orientation
};

/// Parses a POST /vote body. Throws ValidationError on missing fields.
VoteSubmission submission_from_json(const json& j);

struct VoteAck {
  std::int64_t sequence = 0;
  bool task_complete = false;
};

// Task snapshot (tasks.jsonl) plus an append-only vote log (votes.jsonl) in
// one directory. Every accepted vote is written and fsync'ed before
// submit_vote returns. All methods are thread-safe.
class AnnotationStore {
 public:
  explicit AnnotationStore(std::filesystem::path dir);
  ~AnnotationStore();
  AnnotationStore(const AnnotationStore&) = delete;
  AnnotationStore& operator=(const AnnotationStore&) = delete;

  /// Writes the task snapshot. Refuses to replace an existing one.
  static void initialize(const std::filesystem::path& dir, const std::vector<AnnotationTask>& tasks);
  static bool initialized(const std::filesystem::path& dir);

  /// Least-voted open task the annotator has not voted on yet.
  std::optional<TaskView> next_task(const std::string& annotator) const;
  /// Throws NotFoundError (unknown task), ConflictError (already voted, or
  /// the task is complete), ValidationError (bad or missing criterion).
  VoteAck submit_vote(const VoteSubmission& vote);
  /// Side-resolved votes in log order.
  std::vector<eval::HhhVote> export_votes() const;

  std::size_t task_count() const;
  std::size_t vote_count() const;
  std::size_t open_count() const;
  const std::filesystem::path& dir() const { return dir_; }

 private:
  struct Logged {
    std::int64_t sequence;
    std::string task_id;
    std::string annotator;
    std::map<eval::Criterion, eval::Option> shown;  // displayed orientation
    std::int64_t timestamp_ms;
  };

  void replay_log();
  void apply(Logged entry);

  std::filesystem::path dir_;
  int log_fd_ = -1;
  mutable std::mutex mutex_;
  std::vector<AnnotationTask> tasks_;
  std::map<std::string, std::size_t> by_id_;
  std::vector<std::size_t> votes_per_task_;
  std::set<std::pair<std::string, std::string>> voted_;  // (task, annotator)
  std::vector<Logged> log_;
};

struct ServerConfig {
  std::string host = "127.0.0.1";
  int port = 8080;              // 0 picks a free port
  std::string operator_token;   // required for /export; empty disables it
  std::filesystem::path ui_dir; // static bundle, optional
};

// HTTP front end:
//   GET  /health
//   GET  /task?annotator=ID
//   POST /vote      {task_id, annotator, choices: {helpfulness, honesty, harmlessness}}
//   GET  /export    Authorization: Bearer <operator token>
// and the UI bundle under /.
class AnnotationServer {
 public:
  AnnotationServer(AnnotationStore& store, ServerConfig config);
  ~AnnotationServer();

  /// Binds; returns the bound port.
  int bind();
  /// Serves until stop(). bind() is called first if needed.
  void listen();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ik::annotation
