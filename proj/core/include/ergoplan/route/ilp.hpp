#pragma once

#include <string>
#include <vector>

#include "ergoplan/route/graph.hpp"

namespace ergoplan::route {

/// Edge multiplicities, indexed like RouteGraph::edges.
struct IlpSolution {
  std::vector<int> multiplicity;
  double objective = 0.0;
  std::size_t nodes = 0;  ///< branch-and-bound nodes explored
  std::size_t cuts = 0;   ///< lazy constraints added
};

/// Minimum-distance edge multiplicities such that every operator has degree
/// 2, the depot has degree 1, every operator subset S has at least
/// 2*ceil(|S|/capacity) edges leaving it,
/// the support is connected, and exactly one refill vertex has odd degree.
/// Throws EmptyScenario (no operators), Infeasible, std::invalid_argument
/// (capacity < 1).
IlpSolution solve_ilp(const RouteGraph& graph, int capacity);

/// Every constraint of `solve_ilp` violated by the multiplicities, checking all
/// operator subsets. Empty means feasible.
std::vector<std::string> constraint_violations(const RouteGraph& graph, int capacity, const std::vector<int>& z);

}  // namespace ergoplan::route
