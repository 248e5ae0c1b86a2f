#include <filesystem>
#include <fstream>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "instructkit/annotation.hpp"
#include "instructkit/error.hpp"

using namespace ik;
using namespace ik::annotation;
namespace fs = std::filesystem;

namespace {

struct Pool {
  std::vector<InstructionInstance> instances;
  std::vector<ResponseRecord> a, b;
};

Pool pool(int n) {
  Pool p;
  for (int i = 0; i < n; ++i) {
    auto inst = InstructionInstance::create("Instruction " + std::to_string(i), std::nullopt);
    p.a.push_back({inst.id, "model-alpha", 0, "alpha answer " + std::to_string(i), {}});
    p.b.push_back({inst.id, "model-beta", 0, "beta answer " + std::to_string(i), {}});
    p.instances.push_back(std::move(inst));
  }
  return p;
}

fs::path fresh_dir(const std::string& name) {
  auto d = fs::temp_directory_path() / ("ik_test_annot_" + name);
  fs::remove_all(d);
  return d;
}

std::map<std::string, std::string> all_tie() {
  return {{"helpfulness", "tie"}, {"honesty", "tie"}, {"harmlessness", "tie"}};
}

}  // namespace

TEST_CASE("task creation") {
  auto p = pool(252);
  auto tasks = create_tasks(p.instances, p.a, p.b, 7);
  CHECK(tasks.size() == 252);
  CHECK(tasks.front().task_id == "task-0001");
  CHECK(tasks == create_tasks(p.instances, p.a, p.b, 7));
  auto swaps = std::count_if(tasks.begin(), tasks.end(), [](const AnnotationTask& t) { return t.swapped; });
  CHECK(swaps > 80);
  CHECK(swaps < 172);

  auto small = pool(3);
  small.b.pop_back();
  try {
    create_tasks(small.instances, small.a, small.b, 1);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find(small.instances[2].id) != std::string::npos);
  }
}

TEST_CASE("view hides identities and honours the side swap") {
  auto p = pool(1);
  auto t = create_tasks(p.instances, p.a, p.b, 1).front();
  t.swapped = true;
  auto v = annotator_view(t);
  CHECK(v.answer_a == t.answer_b);
  auto dumped = to_json(v).dump();
  CHECK(dumped.find("model-") == std::string::npos);
}

TEST_CASE("store rules") {
  auto dir = fresh_dir("rules");
  auto p = pool(2);
  AnnotationStore::initialize(dir, create_tasks(p.instances, p.a, p.b, 3));
  CHECK_THROWS_AS(AnnotationStore::initialize(dir, {}), ConflictError);
  AnnotationStore store(dir);

  auto first = store.next_task("ann1");
  REQUIRE(first);
  auto ack = store.submit_vote({first->task_id, "ann1", all_tie()});
  CHECK(ack.task_complete);
  CHECK_THROWS_AS(store.submit_vote({first->task_id, "ann1", all_tie()}), ConflictError);
  CHECK_THROWS_AS(store.submit_vote({"task-9999", "ann1", all_tie()}), NotFoundError);
  auto two = all_tie();
  two.erase("honesty");
  CHECK_THROWS_AS(store.submit_vote({"task-0002", "ann1", two}), ValidationError);
  auto bad = all_tie();
  bad["honesty"] = "maybe";
  CHECK_THROWS_AS(store.submit_vote({"task-0002", "ann1", bad}), ValidationError);

  auto next = store.next_task("ann1");
  REQUIRE(next);
  CHECK(next->task_id != first->task_id);
  store.submit_vote({next->task_id, "ann1", all_tie()});
  CHECK_FALSE(store.next_task("ann1"));
  CHECK(store.vote_count() == 2);
}

TEST_CASE("least-voted task first with redundancy") {
  auto dir = fresh_dir("redundancy");
  auto p = pool(2);
  AnnotationStore::initialize(dir, create_tasks(p.instances, p.a, p.b, 3, 3));
  AnnotationStore store(dir);
  store.submit_vote({"task-0001", "x", all_tie()});
  store.submit_vote({"task-0001", "y", all_tie()});
  CHECK(store.next_task("z")->task_id == "task-0002");
  CHECK(store.next_task("x")->task_id == "task-0002");
}

TEST_CASE("votes survive reopen and export resolves sides") {
  auto dir = fresh_dir("reopen");
  auto p = pool(3);
  auto tasks = create_tasks(p.instances, p.a, p.b, 11);
  tasks[0].swapped = true;
  tasks[1].swapped = false;
  AnnotationStore::initialize(dir, tasks);
  {
    AnnotationStore store(dir);
    CHECK(store.export_votes().empty());
    // annotator prefers whatever is displayed on the left
    std::map<std::string, std::string> left = {
        {"helpfulness", "a-strong"}, {"honesty", "a-weak"}, {"harmlessness", "tie"}};
    store.submit_vote({"task-0001", "ann", left});
    store.submit_vote({"task-0002", "ann", left});
  }
  // a torn, unacknowledged tail is dropped on open
  { std::ofstream(dir / "votes.jsonl", std::ios::app) << R"({"sequence": 3, "task_id": "ta)"; }
  AnnotationStore store(dir);
  auto votes = store.export_votes();
  REQUIRE(votes.size() == 2);
  CHECK(votes[0].model_a == "model-alpha");
  CHECK(votes[0].choices.at(eval::Criterion::helpfulness) == eval::Option::b_strong);
  CHECK(votes[0].choices.at(eval::Criterion::honesty) == eval::Option::b_weak);
  CHECK(votes[1].choices.at(eval::Criterion::helpfulness) == eval::Option::a_strong);
  auto tally = eval::tally_hhh(votes);
  REQUIRE(tally.size() == 3);
  CHECK(tally[0].a_wins == 1);
  CHECK(tally[0].b_wins == 1);
  CHECK(tally[2].ties == 2);
  store.submit_vote({"task-0003", "ann", all_tie()});
  CHECK(store.vote_count() == 3);
}

TEST_CASE("http endpoints") {
  auto dir = fresh_dir("http");
  auto p = pool(4);
  AnnotationStore::initialize(dir, create_tasks(p.instances, p.a, p.b, 5));
  AnnotationStore store(dir);
  auto ui = dir / "ui";
  fs::create_directories(ui);
  std::ofstream(ui / "index.html") << "<html><body>annotate</body></html>";
  AnnotationServer server(store, {"127.0.0.1", 0, "op-secret", ui});
  const int port = server.bind();
  std::thread t([&] { server.listen(); });
  server.wait_until_ready();

  httplib::Client cli("127.0.0.1", port);
  std::vector<std::string> bodies;
  auto get = [&](const std::string& path) {
    auto r = cli.Get(path);
    REQUIRE(r);
    bodies.push_back(r->body);
    return r;
  };
  auto post = [&](const json& body) {
    auto r = cli.Post("/vote", body.dump(), "application/json");
    REQUIRE(r);
    bodies.push_back(r->body);
    return r;
  };

  CHECK(get("/health")->status == 200);
  CHECK(get("/task")->status == 400);
  CHECK(get("/index.html")->body.find("annotate") != std::string::npos);
  auto task = json::parse(get("/task?annotator=alice")->body)["task"];
  REQUIRE(task.is_object());
  const auto id = task["task_id"].get<std::string>();
  json vote = {{"task_id", id}, {"annotator", "alice"}, {"choices", all_tie()}};

  // concurrent duplicates: exactly one accepted
  std::vector<int> statuses(8);
  {
    std::vector<std::thread> ts;
    for (int i = 0; i < 8; ++i) {
      ts.emplace_back([&, i] {
        httplib::Client c("127.0.0.1", port);
        auto r = c.Post("/vote", vote.dump(), "application/json");
        statuses[i] = r ? r->status : -1;
      });
    }
    for (auto& th : ts) th.join();
  }
  CHECK(std::count(statuses.begin(), statuses.end(), 200) == 1);
  CHECK(std::count(statuses.begin(), statuses.end(), 409) == 7);

  json partial = {{"task_id", "task-0002"}, {"annotator", "bob"}, {"choices", {{"helpfulness", "tie"}}}};
  CHECK(post(partial)->status == 400);
  CHECK(post({{"task_id", "task-0404"}, {"annotator", "bob"}, {"choices", all_tie()}})->status == 404);
  CHECK(cli.Post("/vote", "{not json", "application/json")->status == 400);

  CHECK(get("/export")->status == 401);
  httplib::Headers auth = {{"Authorization", "Bearer op-secret"}};
  auto exp = cli.Get("/export", auth);
  REQUIRE(exp);
  CHECK(exp->status == 200);
  CHECK(exp->body.find("model-alpha") != std::string::npos);

  server.stop();
  t.join();
  for (const auto& b : bodies) {
    CHECK(b.find("model-alpha") == std::string::npos);
    CHECK(b.find("model-beta") == std::string::npos);
  }
}
