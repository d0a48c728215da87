#pragma once

#include <span>
#include <vector>

#include "ergoplan/dynamics/motion.hpp"
#include "ergoplan/mission/scenario.hpp"
#include "ergoplan/stl/formula.hpp"

namespace ergoplan::trajopt {

/// Per-axis accelerations and slacks, N entries each.
struct DecisionVector {
  dynamics::AxisSeries accelerations;
  dynamics::AxisSeries slack;

  /// Layout: a^(1), a^(2), a^(3), eps^(1), eps^(2), eps^(3).
  [[nodiscard]] std::vector<double> flatten() const;
  static DecisionVector unflatten(std::span<const double> x, std::size_t steps);

  /// Accelerations of `traj` with slack eps = a^2.
  static DecisionVector from_trajectory(const dynamics::Trajectory& traj);
};

struct ObjectiveValue {
  double value = 0.0;              ///< J = rho_smooth - energy_term - penalty_weight * penalty
  double smooth_robustness = 0.0;
  double energy_term = 0.0;        ///< q * sum eps^2
  double penalty = 0.0;            ///< unweighted constraint penalty
  std::vector<double> gradient;    ///< dJ/dx in the flatten() layout
};

/// Single-shooting objective: the trajectory is rolled out from the depot at
/// rest and the payload channel is re-derived from it and held fixed.
class Objective {
 public:
  Objective(const mission::Scenario& scenario, stl::Formula formula);

  [[nodiscard]] std::size_t steps() const { return scenario_.grid.steps(); }
  [[nodiscard]] std::size_t dimension() const { return 6 * steps(); }

  /// Throws NonFiniteValue on non-finite input or result, LengthMismatch on a
  /// wrong-sized x.
  [[nodiscard]] ObjectiveValue evaluate(std::span<const double> x, double penalty_weight, bool with_gradient = true) const;

  [[nodiscard]] dynamics::Trajectory trajectory(std::span<const double> x) const;
  [[nodiscard]] const mission::Scenario& scenario() const { return scenario_; }
  [[nodiscard]] const stl::Formula& formula() const { return formula_; }

 private:
  mission::Scenario scenario_;
  stl::Formula formula_;
};

ObjectiveValue objective(const DecisionVector& dec, const mission::Scenario& scenario, const stl::Formula& formula,
                         double penalty_weight);

/// Largest relative error |g - fd| / max(|g|, |fd|, 1e-3) between the analytic
/// gradient and central differences with step h over the given coordinates.
double gradient_check(const Objective& objective, std::span<const double> x, double penalty_weight,
                      std::span<const std::size_t> coordinates, double h = 1e-6);

}  // namespace ergoplan::trajopt
