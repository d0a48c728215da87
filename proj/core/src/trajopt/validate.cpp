#include "ergoplan/trajopt/validate.hpp"

#include "ergoplan/error.hpp"
#include "ergoplan/mission/compiler.hpp"
#include "ergoplan/stl/robustness.hpp"

namespace ergoplan::trajopt {

ValidationReport validate(const dynamics::Trajectory& traj, const mission::Scenario& scenario) {
  if (!(traj.grid == scenario.grid)) {
    throw LengthMismatch("trajectory grid (" + std::to_string(traj.grid.sample_count()) + " samples at " +
                         std::to_string(traj.grid.sampling_period()) + " s) does not match the scenario grid");
  }
  const mission::MissionFormula mf = mission::compile_mission(scenario);
  ValidationReport rep;
  rep.payload = mission::derive_payload(traj, scenario);
  const stl::Signal signal = mission::make_signal(traj, rep.payload);
  rep.exact_robustness = stl::eval_robust(mf.formula, signal, 0);
  for (const auto& [name, f] : mf.clauses) rep.clauses.emplace_back(name, stl::eval_robust(f, signal, 0));
  rep.residuals = residuals(traj, scenario.limits);
  rep.energy = dynamics::energy(traj).total;
  rep.pass = rep.exact_robustness > 0.0 && rep.residuals.velocity <= kResidualTolerance &&
             rep.residuals.acceleration <= kResidualTolerance && rep.residuals.slack <= kResidualTolerance;
  return rep;
}

ValidationReport validate(const PlanResult& result, const mission::Scenario& scenario) {
  return validate(result.trajectory, scenario);
}

}  // namespace ergoplan::trajopt
