#include "ergoplan/route/graph.hpp"

#include "ergoplan/error.hpp"

namespace ergoplan::route {

RouteGraph make_graph(const Vec3& depot, const std::vector<NamedPoint>& operators,
                      const std::vector<NamedPoint>& refills) {
  if (operators.empty()) throw EmptyScenario("routing needs at least one operator");
  RouteGraph g;
  g.operator_count = operators.size();
  g.refill_count = refills.size();
  g.vertices.push_back({VertexKind::kDepot, "depot", depot, 0.0, depot});
  for (const auto& o : operators) g.vertices.push_back({VertexKind::kOperator, o.id, o.point, 0.0, o.point});
  for (const auto& r : refills) g.vertices.push_back({VertexKind::kRefill, r.id, r.point, 0.0, r.point});

  auto add = [&](std::size_t u, std::size_t v, int cap) {
    g.edges.push_back({u, v, distance(g.vertices[u].point, g.vertices[v].point), cap});
  };
  for (std::size_t i = 0; i < g.operator_count; ++i) add(g.depot(), g.first_operator() + i, 1);
  for (std::size_t i = 0; i < g.operator_count; ++i) {
    for (std::size_t j = i + 1; j < g.operator_count; ++j) add(g.first_operator() + i, g.first_operator() + j, 1);
  }
  for (std::size_t r = 0; r < g.refill_count; ++r) {
    for (std::size_t i = 0; i < g.operator_count; ++i) add(g.first_refill() + r, g.first_operator() + i, 2);
  }
  return g;
}

RouteGraph build_graph(const mission::Scenario& scenario) {
  std::vector<NamedPoint> ops;
  for (const auto& o : scenario.operators) ops.push_back({o.id, o.handover_box.center()});
  std::vector<NamedPoint> rss;
  for (const auto& r : scenario.refill_stations) rss.push_back({r.id, r.box.center()});
  RouteGraph g = make_graph(scenario.depot, ops, rss);
  for (std::size_t i = 0; i < g.operator_count; ++i) g.vertices[g.first_operator() + i].hold = scenario.handover_time;
  for (std::size_t r = 0; r < g.refill_count; ++r) {
    Vertex& v = g.vertices[g.first_refill() + r];
    v.hold = scenario.refill_time;
    v.home = scenario.refill_stations[r].home.center();
  }
  return g;
}

}  // namespace ergoplan::route
