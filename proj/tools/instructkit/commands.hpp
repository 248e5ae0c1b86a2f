#pragma once

#include "CLI11.hpp"
#include "context.hpp"

namespace ik::cli {

// Each adds its subcommand(s); the callback stores the exit status.
void add_data_commands(CLI::App& app, Context& ctx, int& status);   // generate, translate, rate, stats
void add_model_commands(CLI::App& app, Context& ctx, int& status);  // train-reward, rerank
void add_eval_commands(CLI::App& app, Context& ctx, int& status);   // judge, rouge, tally
void add_serve_command(CLI::App& app, Context& ctx, int& status);

}  // namespace ik::cli
