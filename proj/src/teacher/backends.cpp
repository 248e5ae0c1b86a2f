#include "instructkit/backends.hpp"

#include <cstdlib>
#include <fstream>
#include <random>
#include <set>

#include "instructkit/error.hpp"
#include "instructkit/hashing.hpp"
#include "instructkit/prompts.hpp"
#include "instructkit/text.hpp"

namespace ik::teacher {

namespace fs = std::filesystem;

MockBackend::MockBackend() : fn_(default_mock_reply) {}
MockBackend::MockBackend(ReplyFn fn) : fn_(std::move(fn)) {}

std::string MockBackend::chat(const ChatRequest& request) {
  ++calls_;
  return fn_(request);
}

int mock_quality(std::string_view response) {
  std::set<std::string> distinct;
  for (auto& t : text::tokenize(response)) distinct.insert(text::to_lower_ascii(t));
  return 1 + static_cast<int>(std::min<std::size_t>(9, distinct.size() / 5));
}

namespace {

constexpr const char* kVerbs[] = {"write", "create", "describe", "explain", "give", "list", "provide", "generate"};
constexpr const char* kNouns[] = {"story", "list", "summary", "poem", "example", "description", "plan", "answer"};
constexpr const char* kFiller[] = {
    "the",     "a",        "clear",   "simple",  "useful",    "important", "detailed", "result",  "step",
    "idea",    "approach", "method",  "people",  "time",      "world",     "data",     "problem", "solution",
    "should",  "can",      "will",    "often",   "carefully", "quickly",   "also",     "because", "when",
    "and",     "or",       "with",    "without", "for",       "about",     "through",  "between", "new",
    "example", "language", "model",   "process", "system",    "question",  "answer",   "task",    "context",
    "helpful", "accurate", "concise", "creative", "relevant", "balanced",  "complete", "further", "each"};

std::string mock_answer(const ChatRequest& r) {
  const std::uint64_t seed = hash64(cache_key(r));
  std::mt19937_64 rng(seed);
  auto pick = [&](const auto& arr) {
    const std::size_t n = std::size(arr);
    return std::string(arr[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)]);
  };
  const auto budget = static_cast<std::size_t>(std::max<std::int64_t>(3, r.config.max_tokens));
  const std::size_t words = std::min<std::size_t>(budget, 6 + std::uniform_int_distribution<std::size_t>(0, 54)(rng));
  std::string verb = pick(kVerbs);
  verb[0] = static_cast<char>(verb[0] - 'a' + 'A');
  std::string out = verb + " the " + pick(kNouns);
  std::size_t emitted = 3;
  std::size_t sentence = 3;
  while (emitted < words) {
    if (sentence >= 8 && std::uniform_int_distribution<int>(0, 3)(rng) == 0) {
      out += ".";
      std::string w = pick(kFiller);
      w[0] = static_cast<char>(w[0] - 'a' + 'A');
      out += " " + w;
      sentence = 1;
    } else {
      out += " " + pick(kFiller);
      ++sentence;
    }
    ++emitted;
  }
  out += ".";
  return out;
}

}  // namespace

std::string default_mock_reply(const ChatRequest& request) {
  if (auto candidates = rating_candidates(request.prompt)) {
    std::string line;
    for (std::size_t i = 0; i < candidates->size(); ++i) {
      if (i) line += ", ";
      line += std::to_string(mock_quality((*candidates)[i]));
    }
    return line + "\nScores reflect the breadth and detail of each response.";
  }
  if (auto answers = judge_answers(request.prompt)) {
    return std::to_string(mock_quality((*answers)[0])) + " " + std::to_string(mock_quality((*answers)[1])) +
           "\nBoth assistants addressed the question; the scores reflect breadth and detail.";
  }
  if (auto source = translation_source(request.prompt)) return text::reverse_codepoints(*source);
  return mock_answer(request);
}

ResponseCache::ResponseCache(fs::path path) : path_(std::move(path)) {
  if (!fs::exists(path_)) return;
  std::ifstream in(path_, std::ios::binary);
  if (!in) throw IoError("teacher", "cannot open cache '" + path_.string() + "'");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      json j = json::parse(line);
      entries_[j.at("key").get<std::string>()] = j.at("response").get<std::string>();
    } catch (const json::exception&) {
      // A torn final line from an interrupted write is dropped; anything else is corruption.
      if (in.peek() == std::char_traits<char>::eof()) break;
      throw IoError("teacher", "cache '" + path_.string() + "' is corrupt at line " + std::to_string(line_no));
    }
  }
}

std::optional<std::string> ResponseCache::get(const std::string& key) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void ResponseCache::put(const std::string& key, const std::string& value) {
  std::unique_lock lock(mutex_);
  if (entries_.count(key)) return;
  if (path_.has_parent_path()) fs::create_directories(path_.parent_path());
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) throw IoError("teacher", "cannot append to cache '" + path_.string() + "'");
  out << json{{"key", key}, {"response", value}}.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
  out.flush();
  if (!out) throw IoError("teacher", "write to cache '" + path_.string() + "' failed");
  entries_.emplace(key, value);
}

std::size_t ResponseCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

ReplayBackend::ReplayBackend(std::shared_ptr<ResponseCache> cache, std::shared_ptr<Backend> upstream)
    : cache_(std::move(cache)), upstream_(std::move(upstream)) {
  if (!cache_) throw ValidationError("teacher", "replay backend needs a cache");
}

std::string ReplayBackend::chat(const ChatRequest& request) {
  const std::string key = cache_key(request);
  if (auto hit = cache_->get(key)) {
    ++hits_;
    return *hit;
  }
  ++misses_;
  if (!upstream_) throw Error("teacher", "replay cache miss for key " + key.substr(0, 16) + " and no upstream backend");
  std::string reply = upstream_->chat(request);
  cache_->put(key, reply);
  return reply;
}

HttpConfig HttpConfig::from_env() {
  HttpConfig c;
  if (const char* url = std::getenv("INSTRUCTKIT_TEACHER_URL")) c.url = url;
  if (const char* key = std::getenv("INSTRUCTKIT_TEACHER_API_KEY")) c.api_key = key;
  return c;
}

}  // namespace ik::teacher
