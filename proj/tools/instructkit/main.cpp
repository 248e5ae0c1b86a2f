#include <iostream>

#include "commands.hpp"
#include "instructkit/error.hpp"

int main(int argc, char** argv) {
  using namespace ik::cli;
  CLI::App app{"instructkit: instruction data, reward model and evaluation tooling"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  Context ctx;
  auto& f = ctx.flags;
  app.add_option("--config", f.config, "JSON config file (also INSTRUCTKIT_CONFIG)");
  app.add_option("--backend", f.backend, "mock, live or replay");
  app.add_option("--cache", f.cache, "Response cache file");
  app.add_option("--seed", f.seed);
  app.add_option("--workers", f.workers);
  app.add_option("--model", f.model, "Teacher model");
  app.add_option("--temperature", f.temperature);
  app.add_option("--top-p", f.top_p);
  app.add_option("--max-tokens", f.max_tokens);
  app.add_option("--teacher-url", f.teacher_url, "Chat-completion endpoint for the live backend");
  app.fallthrough();

  int status = 0;
  add_data_commands(app, ctx, status);
  add_model_commands(app, ctx, status);
  add_eval_commands(app, ctx, status);
  add_serve_command(app, ctx, status);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const ik::Error& e) {
    std::cerr << "instructkit: " << e.module() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "instructkit: " << e.what() << "\n";
    return 1;
  }
  return status;
}
