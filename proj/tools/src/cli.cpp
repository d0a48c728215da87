#include <cstdlib>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "ergoplan_cli/commands.hpp"

namespace ergoplan::cli {

namespace {

void configure_logging() {
  auto logger = spdlog::get("ergoplan");
  if (!logger) logger = spdlog::stderr_color_mt("ergoplan");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::info);
  const char* env = std::getenv("PLANNER_LOG_LEVEL");
  if (!env) return;
  const std::string level = env;
  if (level == "error") {
    spdlog::set_level(spdlog::level::err);
  } else if (level == "info") {
    spdlog::set_level(spdlog::level::info);
  } else if (level == "debug") {
    spdlog::set_level(spdlog::level::debug);
  } else {
    spdlog::warn("ignoring PLANNER_LOG_LEVEL='{}' (expected error, info or debug)", level);
  }
}

void add_run_flags(CLI::App* cmd, RunOptions& opts, bool solver_flags) {
  cmd->add_option("--out", opts.out_dir, "Directory for the output artifacts")->capture_default_str();
  cmd->add_option("--seed", opts.seed, "Seed recorded in the artifacts and used for the gradient spot check")
      ->capture_default_str();
  if (!solver_flags) return;
  cmd->add_option_function<int>(
         "--max-outer", [&opts](const int& k) { opts.max_outer = k; }, "Outer penalty rounds (default 5)")
      ->check(CLI::PositiveNumber);
  cmd->add_option_function<double>(
         "--penalty-growth", [&opts](const double& g) { opts.penalty_growth = g; },
         "Penalty weight multiplier per outer round (default 10)")
      ->check(CLI::Range(1.0, 1e6));
}

}  // namespace

int run(int argc, char** argv) {
  configure_logging();

  CLI::App app{"Handover mission planner: routing, trajectory optimization and validation"};
  app.require_subcommand(1);

  std::filesystem::path scenario;
  std::filesystem::path trajectory;
  std::optional<std::filesystem::path> formula;
  std::optional<std::filesystem::path> check_out;
  RunOptions opts;

  auto* route = app.add_subcommand("route", "Solve the routing problem and write route.json");
  route->add_option("scenario", scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  add_run_flags(route, opts, false);

  auto* plan = app.add_subcommand("plan", "Plan a trajectory: route, warm start, optimize, validate");
  plan->add_option("scenario", scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  add_run_flags(plan, opts, true);
  plan->add_flag("--no-energy-term", opts.no_energy_term, "Drop the energy term (q = 0)");

  auto* check = app.add_subcommand("check", "Validate a trajectory CSV against a scenario");
  check->add_option("trajectory", trajectory, "Trajectory CSV file")->required()->check(CLI::ExistingFile);
  check->add_option("scenario", scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  check->add_option_function<std::string>(
      "--formula", [&formula](const std::string& f) { formula = f; },
      "Also evaluate this S-expression formula on the trajectory");
  check->add_option_function<std::string>(
      "--out", [&check_out](const std::string& d) { check_out = d; }, "Also write check.json into this directory");

  auto* ablation = app.add_subcommand("ablation", "Plan with and without the energy term and compare energies");
  ablation->add_option("scenario", scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  add_run_flags(ablation, opts, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  if (*route) return cmd_route(scenario, opts);
  if (*plan) return cmd_plan(scenario, opts);
  if (*check) return cmd_check(trajectory, scenario, formula, check_out);
  return cmd_ablation(scenario, opts);
}

}  // namespace ergoplan::cli
