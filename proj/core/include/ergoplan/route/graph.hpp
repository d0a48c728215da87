#pragma once

#include <string>
#include <vector>

#include "ergoplan/geometry.hpp"
#include "ergoplan/mission/scenario.hpp"

namespace ergoplan::route {

enum class VertexKind { kDepot, kOperator, kRefill };

struct Vertex {
  VertexKind kind;
  std::string id;
  Vec3 point{};
  double hold = 0.0;  ///< seconds spent at the vertex on each visit
  Vec3 home{};        ///< refill vertices: where the final visit parks
};

/// Undirected edge with its admissible multiplicities 0..max_multiplicity.
struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  double weight = 0.0;
  int max_multiplicity = 1;
};

/// Vertex 0 is the depot, then the operators, then the refill stations.
/// Edges: depot-operator and operator-operator (at most once), refill-operator
/// (at most twice). There are no depot-refill or refill-refill edges.
struct RouteGraph {
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  std::size_t operator_count = 0;
  std::size_t refill_count = 0;

  [[nodiscard]] std::size_t depot() const { return 0; }
  [[nodiscard]] std::size_t first_operator() const { return 1; }
  [[nodiscard]] std::size_t first_refill() const { return 1 + operator_count; }
  [[nodiscard]] bool is_operator(std::size_t v) const { return v >= 1 && v < first_refill(); }
  [[nodiscard]] bool is_refill(std::size_t v) const { return v >= first_refill(); }
};

struct NamedPoint {
  std::string id;
  Vec3 point{};
};

/// Throws EmptyScenario when there are no operators.
RouteGraph make_graph(const Vec3& depot, const std::vector<NamedPoint>& operators,
                      const std::vector<NamedPoint>& refills);

/// Vertices at the depot, the handover box centers and the refill box centers,
/// with T_han / T_rs holds. Throws EmptyScenario when there are no operators.
RouteGraph build_graph(const mission::Scenario& scenario);

}  // namespace ergoplan::route
