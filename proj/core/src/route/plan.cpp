#include "ergoplan/route/plan.hpp"

#include <algorithm>
#include <numeric>

#include "ergoplan/error.hpp"

namespace ergoplan::route {

std::string_view to_string(VisitKind k) {
  switch (k) {
    case VisitKind::kDepotStart:
      return "depot";
    case VisitKind::kOperator:
      return "operator";
    case VisitKind::kRefill:
      return "refill";
    case VisitKind::kFinalRefill:
      return "final_refill";
  }
  return "?";
}

namespace {

std::size_t other_end(const Edge& e, std::size_t v) { return e.u == v ? e.v : e.u; }

bool reachable(const RouteGraph& g, const std::vector<std::vector<std::size_t>>& adj, const std::vector<int>& remaining,
               std::size_t from, std::size_t to) {
  std::vector<char> seen(g.vertices.size(), 0);
  std::vector<std::size_t> stack{from};
  seen[from] = 1;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    if (v == to) return true;
    for (std::size_t e : adj[v]) {
      if (remaining[e] == 0) continue;
      const std::size_t w = other_end(g.edges[e], v);
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  return false;
}

}  // namespace

RoutePlan extract_route(const IlpSolution& sol, const RouteGraph& graph) {
  if (sol.multiplicity.size() != graph.edges.size()) {
    throw MalformedSolution("solution has " + std::to_string(sol.multiplicity.size()) + " edges, graph has " +
                            std::to_string(graph.edges.size()));
  }
  std::vector<int> remaining = sol.multiplicity;
  std::vector<std::vector<std::size_t>> adj(graph.vertices.size());
  RoutePlan plan;
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    if (remaining[e] < 0 || remaining[e] > graph.edges[e].max_multiplicity) {
      throw MalformedSolution("edge " + std::to_string(e) + " multiplicity outside its domain");
    }
    adj[graph.edges[e].u].push_back(e);
    adj[graph.edges[e].v].push_back(e);
    plan.objective += graph.edges[e].weight * remaining[e];
  }

  auto visit = [&](VisitKind kind, std::size_t v) {
    const Vertex& vx = graph.vertices[v];
    plan.visits.push_back({kind, v, vx.id, vx.point, vx.hold});
  };

  std::vector<char> served(graph.vertices.size(), 0);
  std::size_t cur = graph.depot();
  visit(VisitKind::kDepotStart, cur);
  for (;;) {
    std::vector<std::size_t> options;
    for (std::size_t e : adj[cur]) {
      if (remaining[e] > 0) options.push_back(e);
    }
    if (options.empty()) break;
    std::sort(options.begin(), options.end(), [&](std::size_t a, std::size_t b) {
      const std::string& ia = graph.vertices[other_end(graph.edges[a], cur)].id;
      const std::string& ib = graph.vertices[other_end(graph.edges[b], cur)].id;
      return ia != ib ? ia < ib : a < b;
    });
    std::size_t chosen = options.front();
    if (options.size() > 1) {
      for (std::size_t e : options) {
        if (remaining[e] > 1) {
          chosen = e;
          break;
        }
        --remaining[e];
        const bool bridge = !reachable(graph, adj, remaining, cur, other_end(graph.edges[e], cur));
        ++remaining[e];
        if (!bridge) {
          chosen = e;
          break;
        }
      }
    }
    --remaining[chosen];
    cur = other_end(graph.edges[chosen], cur);
    if (graph.is_operator(cur)) {
      if (served[cur]) throw MalformedSolution("operator " + graph.vertices[cur].id + " is visited twice");
      served[cur] = 1;
      visit(VisitKind::kOperator, cur);
    } else if (graph.is_refill(cur)) {
      visit(VisitKind::kRefill, cur);
    } else {
      throw MalformedSolution("route returns to the depot");
    }
  }

  if (std::any_of(remaining.begin(), remaining.end(), [](int m) { return m != 0; })) {
    throw MalformedSolution("walk from the depot leaves edges unused");
  }
  for (std::size_t v = graph.first_operator(); v < graph.first_refill(); ++v) {
    if (!served[v]) throw MalformedSolution("operator " + graph.vertices[v].id + " is never visited");
  }
  if (plan.visits.back().kind != VisitKind::kRefill) throw MalformedSolution("route does not end at a refill station");
  plan.visits.back().kind = VisitKind::kFinalRefill;
  return plan;
}

RoutePlan plan_route(const mission::Scenario& scenario) {
  const RouteGraph graph = build_graph(scenario);
  return extract_route(solve_ilp(graph, scenario.capacity), graph);
}

WarmStart warm_start(const RoutePlan& plan, const mission::Scenario& scenario) {
  const stl::TimeGrid& grid = scenario.grid;
  const double dt = grid.sampling_period();
  std::vector<std::pair<std::size_t, std::size_t>> holds;
  dynamics::AxisSeries accel;
  Vec3 cur = scenario.depot;

  for (std::size_t i = 0; i < plan.visits.size(); ++i) {
    const Visit& v = plan.visits[i];
    if (v.kind == VisitKind::kDepotStart) continue;
    Vec3 target = v.point;
    if (v.kind == VisitKind::kFinalRefill) {
      const auto it = std::find_if(scenario.refill_stations.begin(), scenario.refill_stations.end(),
                                   [&](const mission::RefillStation& r) { return r.id == v.id; });
      if (it != scenario.refill_stations.end()) target = it->home.center();
    }
    const dynamics::MotionSegment seg = dynamics::rest_to_rest(cur, target, scenario.limits, dt);
    for (int j = 0; j < dynamics::kAxes; ++j) {
      accel[j].insert(accel[j].end(), seg.accelerations[j].begin(), seg.accelerations[j].end());
    }
    const std::size_t arrive = accel[0].size();
    const std::size_t hold = grid.samples_in(v.hold);
    for (int j = 0; j < dynamics::kAxes; ++j) accel[j].resize(arrive + hold, 0.0);
    holds.emplace_back(arrive, arrive + hold);
    cur = target;
  }

  const std::size_t steps = grid.steps();
  const double duration = dt * static_cast<double>(accel[0].size());
  const bool exceeded = accel[0].size() > steps;
  for (int j = 0; j < dynamics::kAxes; ++j) accel[j].resize(steps, 0.0);

  std::array<dynamics::AxisState, dynamics::kAxes> init{};
  for (int j = 0; j < dynamics::kAxes; ++j) init[j] = {scenario.depot[j], 0.0};
  dynamics::Trajectory traj = dynamics::rollout(init, accel, grid);
  traj.heading = dynamics::heading_profile(traj);
  return WarmStart{std::move(traj), exceeded, duration, std::move(holds)};
}

}  // namespace ergoplan::route
