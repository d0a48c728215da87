#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ergoplan/dynamics/motion.hpp"
#include "ergoplan/mission/payload.hpp"
#include "ergoplan/mission/scenario.hpp"
#include "ergoplan/trajopt/solver.hpp"

namespace ergoplan::trajopt {

inline constexpr double kResidualTolerance = 1e-6;

struct ValidationReport {
  bool pass = false;
  double exact_robustness = 0.0;
  std::vector<std::pair<std::string, double>> clauses;
  Residuals residuals;
  mission::PayloadSignal payload;
  double energy = 0.0;
};

/// Exact-semantics check of a trajectory against the compiled mission: passes
/// iff robustness > 0 and every residual is <= kResidualTolerance. Slack is
/// only checked when the trajectory carries it.
ValidationReport validate(const dynamics::Trajectory& traj, const mission::Scenario& scenario);
ValidationReport validate(const PlanResult& result, const mission::Scenario& scenario);

}  // namespace ergoplan::trajopt
