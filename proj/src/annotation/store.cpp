#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <sstream>

#include "instructkit/annotation.hpp"
#include "instructkit/error.hpp"
#include "instructkit/hashing.hpp"

namespace ik::annotation {

namespace fs = std::filesystem;

namespace {

const char* kTasksFile = "tasks.jsonl";
const char* kVotesFile = "votes.jsonl";

std::string task_id_for(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "task-%04zu", i + 1);
  return buf;
}

std::int64_t now_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

std::map<std::string, const ResponseRecord*> first_by_instance(const std::vector<ResponseRecord>& rs) {
  std::map<std::string, const ResponseRecord*> m;
  for (const auto& r : rs) {
    auto& slot = m[r.instance_id];
    if (!slot || r.decode_index < slot->decode_index) slot = &r;
  }
  return m;
}

json choices_json(const std::map<eval::Criterion, eval::Option>& c) {
  json j = json::object();
  for (const auto& [k, v] : c) j[eval::to_string(k)] = eval::to_string(v);
  return j;
}

void write_all(int fd, const std::string& data, const fs::path& path) {
  std::size_t done = 0;
  while (done < data.size()) {
    ssize_t n = ::write(fd, data.data() + done, data.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw IoError("annotation", path.string() + ": write failed: " + std::strerror(errno));
    }
    done += static_cast<std::size_t>(n);
  }
}

}  // namespace

json to_json(const AnnotationTask& t) {
  json j = {{"task_id", t.task_id},   {"instance_id", t.instance_id}, {"instruction", t.instruction},
            {"answer_a", t.answer_a}, {"answer_b", t.answer_b},       {"model_a", t.model_a},
            {"model_b", t.model_b},   {"swapped", t.swapped},         {"target_votes", t.target_votes}};
  if (t.input) j["input"] = *t.input;
  return j;
}

AnnotationTask task_from_json(const json& j) {
  try {
    AnnotationTask t;
    t.task_id = j.at("task_id").get<std::string>();
    t.instance_id = j.value("instance_id", "");
    t.instruction = j.at("instruction").get<std::string>();
    if (j.contains("input") && !j["input"].is_null()) t.input = j["input"].get<std::string>();
    t.answer_a = j.at("answer_a").get<std::string>();
    t.answer_b = j.at("answer_b").get<std::string>();
    t.model_a = j.at("model_a").get<std::string>();
    t.model_b = j.at("model_b").get<std::string>();
    t.swapped = j.value("swapped", false);
    t.target_votes = j.value("target_votes", std::size_t{1});
    if (t.target_votes == 0) throw ValidationError("annotation", "task " + t.task_id + ": target_votes must be >= 1");
    return t;
  } catch (const json::exception& e) {
    throw SchemaError("annotation", std::string("bad task record: ") + e.what());
  }
}

json to_json(const TaskView& v) {
  json j = {{"task_id", v.task_id}, {"instruction", v.instruction}, {"answer_a", v.answer_a}, {"answer_b", v.answer_b}};
  if (v.input) j["input"] = *v.input;
  return j;
}

TaskView annotator_view(const AnnotationTask& t) {
  return {t.task_id, t.instruction, t.input, t.swapped ? t.answer_b : t.answer_a, t.swapped ? t.answer_a : t.answer_b};
}

std::vector<AnnotationTask> create_tasks(const std::vector<InstructionInstance>& instances,
                                         const std::vector<ResponseRecord>& responses_a,
                                         const std::vector<ResponseRecord>& responses_b, std::uint64_t seed,
                                         std::size_t target_votes) {
  if (target_votes == 0) throw ValidationError("annotation", "target_votes must be >= 1");
  const auto a = first_by_instance(responses_a), b = first_by_instance(responses_b);
  std::string missing;
  for (const auto& inst : instances) {
    std::string sides;
    if (!a.count(inst.id)) sides += "a";
    if (!b.count(inst.id)) sides += sides.empty() ? "b" : ",b";
    if (!sides.empty()) missing += (missing.empty() ? "" : "; ") + inst.id + " (" + sides + ")";
  }
  if (!missing.empty()) throw ValidationError("annotation", "responses missing for instances: " + missing);

  std::vector<AnnotationTask> out;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& inst = instances[i];
    const auto& ra = *a.at(inst.id);
    const auto& rb = *b.at(inst.id);
    out.push_back({task_id_for(i), inst.id, inst.instruction, inst.input, ra.text, rb.text, ra.model, rb.model,
                   ((hash64(inst.id, seed) >> 23) & 1) != 0, target_votes});
  }
  return out;
}

VoteSubmission submission_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("annotation", "vote must be a JSON object");
  VoteSubmission v;
  auto str = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_string() || j[key].get<std::string>().empty()) {
      throw ValidationError("annotation", std::string("vote is missing '") + key + "'");
    }
    return j[key].get<std::string>();
  };
  v.task_id = str("task_id");
  v.annotator = str("annotator");
  if (!j.contains("choices") || !j["choices"].is_object()) throw ValidationError("annotation", "vote is missing 'choices'");
  for (const auto& [k, val] : j["choices"].items()) {
    if (!val.is_string()) throw ValidationError("annotation", "choice for '" + k + "' must be a string");
    v.choices[k] = val.get<std::string>();
  }
  return v;
}

bool AnnotationStore::initialized(const fs::path& dir) { return fs::exists(dir / kTasksFile); }

void AnnotationStore::initialize(const fs::path& dir, const std::vector<AnnotationTask>& tasks) {
  fs::create_directories(dir);
  if (initialized(dir)) throw ConflictError("annotation", (dir / kTasksFile).string() + " already exists");
  std::string out;
  for (const auto& t : tasks) out += to_json(t).dump() + "\n";
  write_file_atomic(dir / kTasksFile, out);
}

AnnotationStore::AnnotationStore(fs::path dir) : dir_(std::move(dir)) {
  if (!initialized(dir_)) throw NotFoundError("annotation", "no task snapshot in " + dir_.string());
  std::istringstream in(read_file(dir_ / kTasksFile));
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (line.empty()) continue;
    try {
      auto t = task_from_json(json::parse(line));
      if (!by_id_.emplace(t.task_id, tasks_.size()).second) {
        throw ValidationError("annotation", "duplicate task id " + t.task_id);
      }
      tasks_.push_back(std::move(t));
    } catch (const json::exception& e) {
      throw SchemaError("annotation", (dir_ / kTasksFile).string() + ": line " + std::to_string(n) + ": " + e.what());
    }
  }
  votes_per_task_.assign(tasks_.size(), 0);
  replay_log();
  log_fd_ = ::open((dir_ / kVotesFile).c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
  if (log_fd_ < 0) throw IoError("annotation", (dir_ / kVotesFile).string() + ": " + std::strerror(errno));
}

AnnotationStore::~AnnotationStore() {
  if (log_fd_ >= 0) ::close(log_fd_);
}

void AnnotationStore::replay_log() {
  const auto path = dir_ / kVotesFile;
  if (!fs::exists(path)) return;
  const std::string content = read_file(path);
  std::size_t pos = 0, good = 0, lineno = 0;
  while (pos < content.size()) {
    const auto nl = content.find('\n', pos);
    ++lineno;
    if (nl == std::string::npos) break;  // torn tail: never acknowledged
    const std::string line = content.substr(pos, nl - pos);
    pos = nl + 1;
    if (line.empty()) {
      good = pos;
      continue;
    }
    json j;
    try {
      j = json::parse(line);
      Logged e{j.at("sequence").get<std::int64_t>(), j.at("task_id").get<std::string>(),
               j.at("annotator").get<std::string>(), {}, j.value("timestamp_ms", std::int64_t{0})};
      for (const auto& [k, v] : j.at("choices").items()) {
        e.shown[eval::criterion_from_string(k)] = eval::option_from_string(v.get<std::string>());
      }
      if (!by_id_.count(e.task_id)) throw ValidationError("annotation", "vote for unknown task " + e.task_id);
      apply(std::move(e));
    } catch (const std::exception& ex) {
      throw SchemaError("annotation", path.string() + ": line " + std::to_string(lineno) + ": " + ex.what());
    }
    good = pos;
  }
  if (good < content.size()) fs::resize_file(path, good);
}

void AnnotationStore::apply(Logged entry) {
  ++votes_per_task_[by_id_.at(entry.task_id)];
  voted_.emplace(entry.task_id, entry.annotator);
  log_.push_back(std::move(entry));
}

std::optional<TaskView> AnnotationStore::next_task(const std::string& annotator) const {
  std::lock_guard lock(mutex_);
  const AnnotationTask* best = nullptr;
  std::size_t best_votes = 0;
  for (std::size_t i = 0; i < tasks_.size(); ++i) {
    const auto& t = tasks_[i];
    if (votes_per_task_[i] >= t.target_votes || voted_.count({t.task_id, annotator})) continue;
    if (!best || votes_per_task_[i] < best_votes) {
      best = &t;
      best_votes = votes_per_task_[i];
    }
  }
  if (!best) return std::nullopt;
  return annotator_view(*best);
}

VoteAck AnnotationStore::submit_vote(const VoteSubmission& vote) {
  if (vote.annotator.empty()) throw ValidationError("annotation", "annotator id is required");
  std::map<eval::Criterion, eval::Option> shown;
  for (const auto& [k, v] : vote.choices) shown[eval::criterion_from_string(k)] = eval::option_from_string(v);
  for (auto c : eval::kCriteria) {
    if (!shown.count(c)) throw ValidationError("annotation", std::string("missing choice for ") + eval::to_string(c));
  }

  std::lock_guard lock(mutex_);
  auto it = by_id_.find(vote.task_id);
  if (it == by_id_.end()) throw NotFoundError("annotation", "unknown task " + vote.task_id);
  const auto& task = tasks_[it->second];
  if (voted_.count({vote.task_id, vote.annotator})) {
    throw ConflictError("annotation", "annotator already voted on " + vote.task_id);
  }
  if (votes_per_task_[it->second] >= task.target_votes) {
    throw ConflictError("annotation", vote.task_id + " is already complete");
  }
  Logged e{static_cast<std::int64_t>(log_.size()) + 1, vote.task_id, vote.annotator, shown, now_ms()};
  json j = {{"sequence", e.sequence},
            {"task_id", e.task_id},
            {"annotator", e.annotator},
            {"choices", choices_json(e.shown)},
            {"timestamp_ms", e.timestamp_ms}};
  const auto path = dir_ / kVotesFile;
  const off_t before = ::lseek(log_fd_, 0, SEEK_END);
  try {
    write_all(log_fd_, j.dump() + "\n", path);
    if (::fsync(log_fd_) != 0) throw IoError("annotation", path.string() + ": fsync failed: " + std::strerror(errno));
  } catch (...) {
    if (before >= 0 && ::ftruncate(log_fd_, before) != 0) {
      // the torn line is dropped on the next start
    }
    throw;
  }
  const auto idx = it->second;
  apply(std::move(e));
  return {static_cast<std::int64_t>(log_.size()), votes_per_task_[idx] >= task.target_votes};
}

std::vector<eval::HhhVote> AnnotationStore::export_votes() const {
  std::lock_guard lock(mutex_);
  std::vector<eval::HhhVote> out;
  for (const auto& e : log_) {
    const auto& t = tasks_[by_id_.at(e.task_id)];
    eval::HhhVote v{e.task_id, e.annotator, t.model_a, t.model_b, {}, e.sequence, e.timestamp_ms};
    for (const auto& [c, o] : e.shown) v.choices[c] = t.swapped ? eval::flip(o) : o;
    out.push_back(std::move(v));
  }
  return out;
}

std::size_t AnnotationStore::task_count() const {
  std::lock_guard lock(mutex_);
  return tasks_.size();
}

std::size_t AnnotationStore::vote_count() const {
  std::lock_guard lock(mutex_);
  return log_.size();
}

std::size_t AnnotationStore::open_count() const {
  std::lock_guard lock(mutex_);
  std::size_t n = 0;
  for (std::size_t i = 0; i < tasks_.size(); ++i) n += votes_per_task_[i] < tasks_[i].target_votes;
  return n;
}

}  // namespace ik::annotation
