#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace ergoplan::route {

enum class Sense { kLessEqual, kEqual, kGreaterEqual };

struct LinearConstraint {
  std::vector<std::pair<std::size_t, double>> terms;
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;
};

/// minimize cost . x subject to the constraints and lower <= x <= upper.
/// Lower bounds must be finite; an infinite upper bound means none.
struct LinearProgram {
  std::vector<double> cost;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<LinearConstraint> constraints;

  /// Adds a variable and returns its index.
  std::size_t add_variable(double cost, double lower, double upper);
  [[nodiscard]] std::size_t variable_count() const { return cost.size(); }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;
  std::vector<double> x;
};

/// Dense two-phase primal simplex with Bland's rule.
LpResult solve_lp(const LinearProgram& lp);

/// Returns constraints violated by x (empty when none). `integral` tells
/// whether x already satisfies integrality.
using CutSeparator = std::function<std::vector<LinearConstraint>(std::span<const double> x, bool integral)>;

struct MilpOptions {
  double integrality_tolerance = 1e-6;
  std::size_t max_nodes = 200000;
  std::size_t max_cut_rounds = 200;  ///< per node
};

struct MilpResult {
  bool feasible = false;
  double objective = 0.0;
  std::vector<double> x;
  std::size_t nodes = 0;
  std::size_t cuts = 0;
};

/// Best-first branch-and-bound over the LP relaxation with lazily separated
/// constraints. Branches on the most fractional integer variable, ties to the
/// smallest index. Throws std::runtime_error when the node budget runs out.
MilpResult solve_milp(const LinearProgram& lp, const std::vector<bool>& integer, const CutSeparator& separate,
                      const MilpOptions& options = {});

}  // namespace ergoplan::route
