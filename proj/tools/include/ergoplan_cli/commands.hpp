#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ergoplan/mission/scenario.hpp"
#include "ergoplan/route/plan.hpp"
#include "ergoplan/trajopt/solver.hpp"
#include "ergoplan/trajopt/validate.hpp"

namespace ergoplan::cli {

enum ExitCode : int {
  kOk = 0,
  kInternalError = 1,
  kInputError = 2,
  kInfeasibleRoute = 3,
  kUnsatisfied = 4,
};

struct RunOptions {
  std::filesystem::path out_dir = ".";
  std::uint64_t seed = 0;
  bool no_energy_term = false;
  std::optional<int> max_outer;
  std::optional<double> penalty_growth;
};

/// Longest stay inside one handover or refill box.
struct HoldSummary {
  std::string id;
  std::string kind;  ///< "handover" or "refill"
  double longest = 0.0;  ///< seconds between the first and last sample of the run
  /// Time at which a stay first reached the required duration, if ever.
  std::optional<double> completed_at;
};

struct MissionSummary {
  std::vector<HoldSummary> holds;
  /// Samples strictly inside an obstacle or an operator's behind region.
  std::size_t forbidden_samples = 0;
  /// When the last required hold was completed; unset if one never was.
  std::optional<double> completion_time;
};

MissionSummary summarize(const dynamics::Trajectory& traj, const mission::Scenario& scenario);

/// Route and warm start shared by the runs of one scenario.
struct Routing {
  route::RouteGraph graph;
  route::IlpSolution solution;
  route::RoutePlan plan;
  route::WarmStart warm;
};

Routing compute_routing(const mission::Scenario& scenario);

/// Everything one planning run produces.
struct PlanRun {
  Routing routing;
  trajopt::SolverConfig config;
  double energy_weight = 0.0;
  trajopt::PlanResult result;
  trajopt::ValidationReport validation;
  MissionSummary summary;
};

trajopt::SolverConfig solver_config(const RunOptions& options);

/// Solves from the routing's warm start and validates the result.
PlanRun run_plan(const mission::Scenario& scenario, const Routing& routing, const RunOptions& options);

nlohmann::json route_json(const Routing& routing, std::uint64_t seed);
nlohmann::json report_json(const PlanRun& run, const std::string& scenario_name, const RunOptions& options);
nlohmann::json ablation_json(const PlanRun& with_energy, const PlanRun& without_energy, std::uint64_t seed);

/// Column header of solver_log.csv.
inline constexpr const char* kSolverLogHeader = "iter,penalty_weight,J,rho_exact,rho_smooth,energy,max_residual";
std::string solver_log_csv(const trajopt::PlanResult& result);

// Subcommands. Each writes its artifacts under options.out_dir and returns an
// ExitCode; errors are logged, not thrown.
int cmd_route(const std::filesystem::path& scenario_file, const RunOptions& options);
int cmd_plan(const std::filesystem::path& scenario_file, const RunOptions& options);
int cmd_check(const std::filesystem::path& trajectory_file, const std::filesystem::path& scenario_file,
              const std::optional<std::filesystem::path>& formula_file, const std::optional<std::filesystem::path>& out_dir);
int cmd_ablation(const std::filesystem::path& scenario_file, const RunOptions& options);

/// Parses the command line and dispatches.
int run(int argc, char** argv);

}  // namespace ergoplan::cli
