#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "instructkit/dataset.hpp"

using namespace ik;
namespace fs = std::filesystem;

namespace {

struct Result {
  int status = -1;
  std::string out;
};

// Runs the CLI through the shell; stderr is folded into the captured text.
Result run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " '" IK_CLI_PATH "' " + args + " 2>&1";
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  char buf[4096];
  while (auto n = fread(buf, 1, sizeof buf, p)) r.out.append(buf, n);
  const int rc = pclose(p);
  r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return r;
}

fs::path workdir() {
  auto d = fs::temp_directory_path() / "ik_test_cli";
  fs::remove_all(d);
  fs::create_directories(d);
  std::vector<InstructionInstance> xs;
  for (int i = 0; i < 5; ++i) xs.push_back(InstructionInstance::create("Write line " + std::to_string(i), std::nullopt));
  save_dataset(Dataset::of(DatasetKind::instruction_following, xs), d / "in.jsonl");
  return d;
}

}  // namespace

TEST_CASE("settings precedence is flag > env > config > default") {
  auto d = workdir();
  std::ofstream(d / "cfg.json") << R"({"seed": 3, "model": "from-config", "workers": 2, "temperature": 0.5})";
  const auto in = (d / "in.jsonl").string(), out = (d / "out.jsonl").string();
  auto r = run("--config " + (d / "cfg.json").string() + " --model from-flag generate --in " + in + " --out " + out,
               "INSTRUCTKIT_SEED=9 INSTRUCTKIT_WORKERS=1");
  REQUIRE(r.status == 0);
  auto meta = json::parse(read_file(meta_path(d / "out.jsonl")));
  CHECK(meta["config"]["model"] == "from-flag");
  CHECK(meta["config_sources"]["model"] == "flag");
  CHECK(meta["config"]["seed"] == 9);
  CHECK(meta["config_sources"]["seed"] == "env");
  CHECK(meta["config"]["temperature"] == 0.5);
  CHECK(meta["config_sources"]["temperature"] == "config");
  CHECK(meta["config_sources"]["top_p"] == "default");
}

TEST_CASE("credentials never reach the provenance") {
  auto d = workdir();
  auto r = run("generate --in " + (d / "in.jsonl").string() + " --out " + (d / "o.jsonl").string(),
               "INSTRUCTKIT_TEACHER_API_KEY=sk-very-secret");
  REQUIRE(r.status == 0);
  CHECK(read_file(meta_path(d / "o.jsonl")).find("sk-very-secret") == std::string::npos);
}

TEST_CASE("exit codes") {
  auto d = workdir();
  const auto in = (d / "in.jsonl").string();
  CHECK(run("--help").status == 0);
  CHECK(run("no-such-command").status == 1);

  std::ofstream(d / "bad.jsonl") << "{\"instruction\": 5}\n";
  auto bad = run("generate --in " + (d / "bad.jsonl").string() + " --out " + (d / "x.jsonl").string());
  CHECK(bad.status == 1);
  CHECK(bad.out.rfind("instructkit: ", 0) == 0);
  CHECK(bad.out.find("line 1") != std::string::npos);

  // replay with an empty cache: every call misses, the pass still completes
  std::ofstream(d / "empty.cache").close();
  auto partial = run("--backend replay --cache " + (d / "empty.cache").string() + " generate --in " + in +
                     " --out " + (d / "p.jsonl").string());
  CHECK(partial.status == 2);
  CHECK(partial.out.find("\"status\":\"partial\"") != std::string::npos);
  CHECK(load_dataset(d / "p.jsonl", DatasetKind::instruction_following).size() == 5);

  // a mock run fills the cache; replay then succeeds offline
  CHECK(run("--cache " + (d / "c.cache").string() + " generate --in " + in + " --out " + (d / "m.jsonl").string())
            .status == 0);
  auto replay = run("--backend replay --cache " + (d / "c.cache").string() + " generate --in " + in + " --out " +
                    (d / "r.jsonl").string());
  CHECK(replay.status == 0);
  CHECK(read_file(d / "r.jsonl") == read_file(d / "m.jsonl"));
}
