#pragma once

#include <cstdint>
#include <vector>

#include "ergoplan/dynamics/motion.hpp"
#include "ergoplan/mission/scenario.hpp"
#include "ergoplan/stl/formula.hpp"

namespace ergoplan::trajopt {

struct SolverConfig {
  int max_outer_iterations = 5;
  int max_inner_iterations = 150;
  double initial_penalty = 1.0;
  double penalty_growth = 10.0;
  double tolerance = 1e-9;        ///< relative merit change that ends an inner loop
  bool finite_difference_check = false;
  std::uint64_t seed = 0;         ///< picks the finite-difference coordinates
  int lbfgs_memory = 8;
  double armijo = 1e-4;
  double backtrack = 0.5;
  int max_backtracks = 40;
  double max_step = 0.02;  ///< largest change of any decision entry per inner step

  /// Throws std::invalid_argument unless every field is in range.
  void validate() const;
};

struct Residuals {
  double velocity = 0.0;      ///< max |v| - v_max over samples and axes, floored at 0
  double acceleration = 0.0;  ///< max |a| - a_max
  double slack = 0.0;         ///< max a^2 - eps (and -eps)
};

/// One row of the solver log, written after each outer round.
struct LogEntry {
  int iteration = 0;
  double penalty_weight = 0.0;
  double objective = 0.0;
  double exact_robustness = 0.0;
  double smooth_robustness = 0.0;
  double energy = 0.0;
  double max_residual = 0.0;
};

struct PlanResult {
  dynamics::Trajectory trajectory;
  double exact_robustness = 0.0;
  double smooth_robustness = 0.0;
  double energy = 0.0;
  double warm_start_energy = 0.0;
  Residuals residuals;
  int iterations = 0;  ///< accepted inner steps over all rounds
  bool satisfied = false;
  std::vector<LogEntry> log;
  /// Every accepted inner-loop merit value in order, one vector per round.
  std::vector<std::vector<double>> merit_history;
  /// Largest relative error of the finite-difference check at the returned
  /// iterate, when enabled.
  double gradient_check_error = 0.0;
};

Residuals residuals(const dynamics::Trajectory& traj, const dynamics::MotionLimits& limits);

/// Maximizes the objective from the warm start with a quadratic penalty
/// method (projected L-BFGS inner loop). Returns the best iterate: satisfying
/// ones first (exact robustness > 0, bound residuals <= 1e-7), then by
/// smooth robustness minus the energy term.
PlanResult solve(const mission::Scenario& scenario, const stl::Formula& formula, const dynamics::Trajectory& warm,
                 const SolverConfig& config = {});

}  // namespace ergoplan::trajopt
