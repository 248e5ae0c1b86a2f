#include <pthread.h>
#include <csignal>
#include <iostream>
#include <thread>

#include "commands.hpp"
#include "instructkit/annotation.hpp"
#include "instructkit/error.hpp"

namespace ik::cli {

namespace {

struct ServeArgs {
  std::string store, instances, responses_a, responses_b, name_a, name_b, kind = "benchmark";
  std::optional<std::string> host, ui_dir, operator_token;
  std::optional<std::int64_t> port;
  std::size_t target_votes = 1;
};

int run_serve(Context& ctx, const ServeArgs& a) {
  ctx.resolve();
  const fs::path dir = a.store;
  bool created = false;
  if (!annotation::AnnotationStore::initialized(dir)) {
    if (a.instances.empty() || a.responses_a.empty() || a.responses_b.empty()) {
      throw ValidationError("cli", dir.string() +
                                       " holds no tasks yet; pass --instances, --responses-a and --responses-b");
    }
    auto instances = load_instances(a.instances, a.kind);
    auto set_a = load_answers(a.responses_a, a.name_a);
    auto set_b = load_answers(a.responses_b, a.name_b);
    for (auto& r : set_a.records) r.model = set_a.name;
    for (auto& r : set_b.records) r.model = set_b.name;
    auto tasks = annotation::create_tasks(instances.instances(), set_a.records, set_b.records, ctx.seed(),
                                          a.target_votes);
    annotation::AnnotationStore::initialize(dir, tasks);
    json meta = ctx.run_meta("serve", {{"instances", a.instances},
                                       {"responses_a", a.responses_a},
                                       {"responses_b", a.responses_b}});
    meta["model_a"] = set_a.name;
    meta["model_b"] = set_b.name;
    meta["target_votes"] = a.target_votes;
    write_file_atomic(dir / "store.meta.json", dump_pretty(meta));
    created = true;
  }

  annotation::AnnotationStore store(dir);
  annotation::ServerConfig cfg;
  cfg.host = ctx.setting("host", a.host, "INSTRUCTKIT_SERVE_HOST", cfg.host);
  cfg.port = static_cast<int>(ctx.setting("port", a.port, "INSTRUCTKIT_SERVE_PORT", cfg.port));
  cfg.ui_dir = ctx.setting("ui_dir", a.ui_dir, "INSTRUCTKIT_SERVE_DIR", "");
  cfg.operator_token = ctx.setting("operator_token", a.operator_token, "INSTRUCTKIT_OPERATOR_TOKEN", "", true);

  // SIGINT/SIGTERM are blocked here (and in every server thread) and
  // collected by a waiter that stops the server.
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);

  annotation::AnnotationServer server(store, cfg);
  const int port = server.bind();
  std::cout << json{{"event", "listening"},
                    {"host", cfg.host},
                    {"port", port},
                    {"tasks", store.task_count()},
                    {"votes", store.vote_count()},
                    {"created", created}}
                   .dump()
            << std::endl;

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&set, &sig);
    server.stop();
  });
  server.listen();
  // listen() may also end without a signal; wake the waiter
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  return finish({{"command", "serve"}, {"votes", store.vote_count()}, {"open", store.open_count()}}, 0);
}

}  // namespace

void add_serve_command(CLI::App& app, Context& ctx, int& status) {
  auto a = std::make_shared<ServeArgs>();
  auto* sub = app.add_subcommand("serve", "Run the blinded pairwise annotation service");
  sub->add_option("--store", a->store, "Store directory (tasks + vote log)")->required();
  sub->add_option("--instances", a->instances, "Questions, used when the store is new");
  sub->add_option("--responses-a", a->responses_a);
  sub->add_option("--responses-b", a->responses_b);
  sub->add_option("--name-a", a->name_a);
  sub->add_option("--name-b", a->name_b);
  sub->add_option("--kind", a->kind)->capture_default_str();
  sub->add_option("--target-votes", a->target_votes, "Votes collected per task")->capture_default_str();
  sub->add_option("--host", a->host);
  sub->add_option("--port", a->port, "0 picks a free port");
  sub->add_option("--ui-dir", a->ui_dir, "Static UI bundle");
  sub->add_option("--operator-token", a->operator_token, "Bearer token for /export");
  sub->callback([&ctx, &status, a] { status = run_serve(ctx, *a); });
}

}  // namespace ik::cli
