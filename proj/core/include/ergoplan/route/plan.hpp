#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ergoplan/dynamics/motion.hpp"
#include "ergoplan/mission/scenario.hpp"
#include "ergoplan/route/graph.hpp"
#include "ergoplan/route/ilp.hpp"

namespace ergoplan::route {

enum class VisitKind { kDepotStart, kOperator, kRefill, kFinalRefill };

std::string_view to_string(VisitKind k);

struct Visit {
  VisitKind kind;
  std::size_t vertex = 0;
  std::string id;
  Vec3 point{};
  double hold = 0.0;
};

struct RoutePlan {
  std::vector<Visit> visits;
  double objective = 0.0;
};

/// Walks the solution multigraph from the depot, consuming one multiplicity
/// per step. Never crosses a bridge while another edge is available; among the
/// rest it takes the neighbor with the smallest id. Throws MalformedSolution if
/// the walk does not use every edge, repeats an operator, or stops anywhere but
/// a refill vertex.
RoutePlan extract_route(const IlpSolution& sol, const RouteGraph& graph);

/// build_graph + solve_ilp + extract_route.
RoutePlan plan_route(const mission::Scenario& scenario);

struct WarmStart {
  dynamics::Trajectory trajectory;
  /// The route did not fit in the horizon and was cut at T_N.
  bool horizon_exceeded = false;
  /// Seconds until the last hold ends (before padding or truncation).
  double route_duration = 0.0;
  /// Sample range [first, last] of the hold at each visit after the depot
  /// start. Ranges may run past the horizon when the route was truncated.
  std::vector<std::pair<std::size_t, std::size_t>> holds;
};

/// Rest-to-rest moves between consecutive visit points with a zero-acceleration
/// hold of round(hold / T_s) steps at each stop, rolled out from the depot. The
/// final visit parks at the station's home point. Shorter routes are padded
/// with a terminal hold; longer ones are truncated and flagged.
WarmStart warm_start(const RoutePlan& plan, const mission::Scenario& scenario);

}  // namespace ergoplan::route
