#include <filesystem>
#include <mutex>
#include <random>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "instructkit/backends.hpp"
#include "instructkit/error.hpp"
#include "instructkit/prompts.hpp"
#include "instructkit/workflows.hpp"

using namespace ik;
using namespace ik::teacher;
namespace fs = std::filesystem;

namespace {

// Written out independently of TemplateSet::alpaca().
const std::string kWithInput =
    "Below is an instruction that describes a task, paired with an input that provides further context. "
    "Write a response that appropriately completes the request.\n\n### Instruction:\n";
const std::string kNoInput =
    "Below is an instruction that describes a task. "
    "Write a response that appropriately completes the request.\n\n### Instruction:\n";

RetryPolicy no_sleep() {
  RetryPolicy p;
  p.sleep = [](std::chrono::milliseconds) {};
  return p;
}

WorkflowOptions quiet_options() {
  WorkflowOptions o;
  o.retry = no_sleep();
  return o;
}

Dataset small_dataset(int n) {
  std::vector<InstructionInstance> v;
  for (int i = 0; i < n; ++i) v.push_back(InstructionInstance::create("Task number " + std::to_string(i), std::nullopt));
  return Dataset::of(DatasetKind::instruction_following, std::move(v));
}

}  // namespace

TEST_CASE("alpaca templates byte-exact") {
  auto a = InstructionInstance::create("Give three tips.", std::nullopt);
  CHECK(render_prompt(a) == kNoInput + "Give three tips.\n\n### Response:");
  auto b = InstructionInstance::create("Sum", std::string("1 2"));
  CHECK(render_prompt(b) == kWithInput + "Sum\n\n### Input:\n1 2\n\n### Response:");
  // placeholders inside the substituted text are not expanded again
  auto c = InstructionInstance::create("{input}", std::string("{instruction}"));
  CHECK(render_prompt(c) == kWithInput + "{input}\n\n### Input:\n{instruction}\n\n### Response:");
}

TEST_CASE("template validation") {
  TemplateSet t = TemplateSet::alpaca();
  t.prompt_no_input += "{input}";
  CHECK_THROWS_AS(validate(t), ValidationError);
  CHECK_NOTHROW(validate(TemplateSet::alpaca()));
}

TEST_CASE("decoding defaults") {
  DecodingConfig c;
  CHECK(c.model == "gpt-4");
  CHECK(c.temperature == 1.0);
  CHECK(c.top_p == 1.0);
  CHECK(c.max_tokens == 512);
  c.top_p = 0.0;
  CHECK_THROWS_AS(validate(c), ValidationError);
}

TEST_CASE("cache key tracks every decoding field") {
  ChatRequest r{"p", {}, "v1", 0};
  auto base = cache_key(r);
  auto changed = [&](auto mutate) {
    ChatRequest copy = r;
    mutate(copy);
    return cache_key(copy) != base;
  };
  CHECK(changed([](ChatRequest& x) { x.prompt = "q"; }));
  CHECK(changed([](ChatRequest& x) { x.template_version = "v2"; }));
  CHECK(changed([](ChatRequest& x) { x.config.model = "gpt-3.5"; }));
  CHECK(changed([](ChatRequest& x) { x.config.temperature = 0.5; }));
  CHECK(changed([](ChatRequest& x) { x.config.top_p = 0.9; }));
  CHECK(changed([](ChatRequest& x) { x.config.max_tokens = 10; }));
  CHECK(changed([](ChatRequest& x) { x.sample_index = 1; }));
}

TEST_CASE("score parsing") {
  CHECK(parse_scores("Scores: 7, 9", 2).scores == std::vector<double>{7, 9});
  CHECK(parse_scores("Sure!\n8, 8, 3\nbecause", 3).scores == std::vector<double>{8, 8, 3});
  CHECK(parse_scores("Assistant 1: 7.5, Assistant 2: 9", 2).scores == std::vector<double>{7.5, 9});
  CHECK_FALSE(parse_scores("7/10 and nine", 2).scores);
  CHECK_FALSE(parse_scores("great answers!", 2).scores);
  CHECK_FALSE(parse_scores("11, 3", 2).scores);
  CHECK_FALSE(parse_scores("7.25, 3", 2).scores);
  CHECK_FALSE(parse_scores("", 1).scores);
}

TEST_CASE("mock backend is deterministic") {
  MockBackend a, b;
  ChatRequest r{render_prompt(InstructionInstance::create("Write a poem.", std::nullopt)), {}, "v", 0};
  CHECK(a.chat(r) == b.chat(r));
  ChatRequest r2 = r;
  r2.sample_index = 1;
  CHECK(a.chat(r) != a.chat(r2));
  MockBackend scripted([](const ChatRequest& q) { return "echo:" + q.prompt; });
  CHECK(complete("hi", DecodingConfig{}, scripted).text == "echo:hi");
}

TEST_CASE("retry on retryable errors only") {
  int calls = 0;
  MockBackend flaky([&](const ChatRequest&) -> std::string {
    if (++calls < 3) throw RetryableError("busy", true);
    return "ok";
  });
  std::vector<std::chrono::milliseconds> waits;
  RetryPolicy p;
  p.sleep = [&](std::chrono::milliseconds d) { waits.push_back(d); };
  auto c = complete("x", DecodingConfig{}, flaky, p);
  CHECK(c.text == "ok");
  CHECK(c.attempts == 3);
  REQUIRE(waits.size() == 2);
  CHECK(waits[0] >= std::chrono::milliseconds(1000));
  CHECK(waits[1] >= std::chrono::milliseconds(2000));

  MockBackend dead([](const ChatRequest&) -> std::string { throw RetryableError("down", false); });
  try {
    complete("x", DecodingConfig{}, dead, no_sleep());
    FAIL("expected TransportError");
  } catch (const TransportError& e) {
    CHECK(e.attempts() == 5);
  }
  MockBackend broken([](const ChatRequest&) -> std::string { throw ProtocolError("bad", "{}"); });
  CHECK_THROWS_AS(complete("x", DecodingConfig{}, broken, no_sleep()), ProtocolError);
}

TEST_CASE("replay cache serves repeats without upstream calls") {
  auto path = fs::temp_directory_path() / "ik_test_cache.jsonl";
  fs::remove(path);
  auto upstream = std::make_shared<MockBackend>();
  {
    ReplayBackend replay(std::make_shared<ResponseCache>(path), upstream);
    auto first = complete("hello", DecodingConfig{}, replay).text;
    CHECK(complete("hello", DecodingConfig{}, replay).text == first);
    CHECK(upstream->calls() == 1);
    CHECK(replay.hits() == 1);
  }
  ReplayBackend offline(std::make_shared<ResponseCache>(path));
  CHECK_NOTHROW(complete("hello", DecodingConfig{}, offline));
  CHECK_THROWS_AS(complete("other", DecodingConfig{}, offline), Error);
}

TEST_CASE("generate answers with partial failure and rerun through the cache") {
  auto data = small_dataset(10);
  const std::string bad = data.instances()[4].instruction;
  std::atomic<int> live_calls{0};
  auto upstream = std::make_shared<MockBackend>([&](const ChatRequest& r) -> std::string {
    ++live_calls;
    if (r.prompt.find(bad + "\n") != std::string::npos) throw ProtocolError("rejected", "{}");
    return "answer";
  });
  auto path = fs::temp_directory_path() / "ik_test_gen_cache.jsonl";
  fs::remove(path);
  auto cache = std::make_shared<ResponseCache>(path);
  ReplayBackend backend(cache, upstream);
  auto res = generate_answers(data, DecodingConfig{}, backend, quiet_options());
  REQUIRE(res.failures.size() == 1);
  CHECK(res.failures[0].id == data.instances()[4].id);
  int filled = 0;
  for (const auto& r : res.dataset.instances()) filled += r.output.has_value();
  CHECK(filled == 9);

  live_calls = 0;
  auto again = generate_answers(data, DecodingConfig{}, backend, quiet_options());
  CHECK(live_calls == 1);
  CHECK(again.failures.size() == 1);
}

TEST_CASE("existing outputs are kept unless overwrite") {
  std::vector<InstructionInstance> v = {InstructionInstance::create("A", std::nullopt, std::string("kept")),
                                        InstructionInstance::create("B", std::nullopt)};
  MockBackend mock([](const ChatRequest&) { return std::string("new"); });
  auto res = generate_answers(Dataset::of(DatasetKind::instruction_following, v), DecodingConfig{}, mock);
  CHECK(res.dataset.instances()[0].output == "kept");
  CHECK(res.dataset.instances()[1].output == "new");
  CHECK(res.requested == 1);
}

TEST_CASE("translation") {
  std::vector<InstructionInstance> v = {InstructionInstance::create("abc", std::string("de"), std::string("out"))};
  MockBackend mock;
  auto res = translate_instructions(Dataset::of(DatasetKind::instruction_following, v), DecodingConfig{}, mock);
  REQUIRE(res.dataset.size() == 1);
  const auto& t = res.dataset.instances()[0];
  CHECK(t.instruction == "cba");
  CHECK(t.input == "ed");
  CHECK_FALSE(t.output);
  CHECK(t.language == Language::zh);
  CHECK(t.id == canonical_id("cba", std::string("ed"), Language::zh));
  CHECK(res.id_map.at(0).first == v[0].id);
  CHECK(translate_instructions(Dataset::of(DatasetKind::instruction_following, {}), DecodingConfig{}, mock)
            .dataset.size() == 0);
}

TEST_CASE("ratings with reprompt") {
  std::vector<std::string> seen;
  std::mutex m;
  MockBackend chatty([&](const ChatRequest& r) {
    std::lock_guard lock(m);
    seen.push_back(r.prompt);
    return seen.size() == 1 ? std::string("7/10 and nine") : std::string("Scores: 7, 9");
  });
  auto rec = collect_ratings("p", {{"a", "m1"}, {"b", "m2"}}, DecodingConfig{}, chatty, quiet_options());
  CHECK(seen.size() == 2);
  CHECK(rec.responses[0].score == 7);
  CHECK(rec.responses[1].score == 9);
  CHECK(rec.raw == "Scores: 7, 9");

  MockBackend hopeless([](const ChatRequest&) { return std::string("great answers!"); });
  try {
    collect_ratings("p", {{"a", "m1"}, {"b", "m2"}}, DecodingConfig{}, hopeless, quiet_options());
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.raw() == "great answers!");
  }
  MockBackend stock;
  auto self = collect_ratings("p", {{"a", "m1"}}, DecodingConfig{}, stock, quiet_options());
  CHECK_THROWS_AS(validate(self), ValidationError);
}

TEST_CASE("live backend: 429 then success") {
  httplib::Server server;
  std::mutex m;
  std::vector<json> bodies;
  std::vector<std::string> auth;
  server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
    std::lock_guard lock(m);
    bodies.push_back(json::parse(req.body));
    auth.push_back(req.get_header_value("Authorization"));
    if (bodies.size() == 1) {
      res.status = 429;
      res.set_content(R"({"error": "slow down"})", "application/json");
      return;
    }
    res.set_content(R"({"choices": [{"message": {"role": "assistant", "content": "fine"}}]})", "application/json");
  });
  int port = server.bind_to_any_port("127.0.0.1");
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  HttpBackend backend({"http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions", "k123", std::chrono::seconds(5)});
  std::vector<std::chrono::milliseconds> waits;
  RetryPolicy p;
  p.sleep = [&](std::chrono::milliseconds d) { waits.push_back(d); };
  auto c = complete("prompt text", DecodingConfig{}, backend, p);
  server.stop();
  t.join();

  CHECK(c.text == "fine");
  CHECK(c.attempts == 2);
  CHECK(waits.size() == 1);
  REQUIRE(bodies.size() == 2);
  const auto& b = bodies[1];
  CHECK(b["model"] == "gpt-4");
  CHECK(b["temperature"] == 1.0);
  CHECK(b["top_p"] == 1.0);
  CHECK(b["max_tokens"] == 512);
  REQUIRE(b["messages"].size() == 1);
  CHECK(b["messages"][0]["role"] == "user");
  CHECK(b["messages"][0]["content"] == "prompt text");
  CHECK(auth[1] == "Bearer k123");
}

TEST_CASE("malformed endpoint reply carries the payload") {
  try {
    HttpBackend::parse_reply(R"({"unexpected": true})");
    FAIL("expected ProtocolError");
  } catch (const ProtocolError& e) {
    CHECK(e.raw().find("unexpected") != std::string::npos);
  }
}
