#include "ergoplan/route/ilp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ergoplan/error.hpp"
#include "ergoplan/route/milp.hpp"

namespace ergoplan::route {

namespace {

// Up to this many operators every subset is checked during separation.
constexpr std::size_t kExhaustiveSubsets = 12;
constexpr std::size_t kMaxCutsPerRound = 16;
constexpr double kSupportEps = 1e-6;

int required_ends(std::size_t subset_size, int capacity) {
  return 2 * static_cast<int>((subset_size + static_cast<std::size_t>(capacity) - 1) / static_cast<std::size_t>(capacity));
}

/// Connected components of the graph restricted to edges with value > eps
/// (and, when `operators_only`, to operator-operator edges).
std::vector<std::size_t> components(const RouteGraph& g, std::span<const double> x, bool operators_only) {
  std::vector<std::size_t> parent(g.vertices.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    if (x[e] <= kSupportEps) continue;
    const Edge& ed = g.edges[e];
    if (operators_only && !(g.is_operator(ed.u) && g.is_operator(ed.v))) continue;
    const std::size_t a = find(ed.u);
    const std::size_t b = find(ed.v);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> root(g.vertices.size());
  for (std::size_t v = 0; v < root.size(); ++v) root[v] = find(v);
  return root;
}

/// Rounded capacity cut: edges with exactly one end in the operator set `in_s`.
LinearConstraint capacity_cut(const RouteGraph& g, const std::vector<char>& in_s, std::size_t size, int capacity) {
  LinearConstraint c;
  c.sense = Sense::kGreaterEqual;
  c.rhs = required_ends(size, capacity);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const Edge& ed = g.edges[e];
    if (in_s[ed.u] != in_s[ed.v]) c.terms.emplace_back(e, 1.0);
  }
  return c;
}

double lhs(const LinearConstraint& c, std::span<const double> x) {
  double s = 0.0;
  for (const auto& [j, a] : c.terms) s += a * x[j];
  return s;
}

std::vector<LinearConstraint> separate(const RouteGraph& g, int capacity, std::span<const double> x) {
  const std::size_t tau = g.operator_count;
  std::vector<std::pair<double, LinearConstraint>> found;

  if (tau <= kExhaustiveSubsets) {
    for (std::size_t mask = 1; mask < (std::size_t{1} << tau); ++mask) {
      std::vector<char> in_s(g.vertices.size(), 0);
      std::size_t size = 0;
      for (std::size_t i = 0; i < tau; ++i) {
        if (mask >> i & 1) {
          in_s[g.first_operator() + i] = 1;
          ++size;
        }
      }
      LinearConstraint c = capacity_cut(g, in_s, size, capacity);
      const double gap = c.rhs - lhs(c, x);
      if (gap > kSupportEps) found.emplace_back(gap, std::move(c));
    }
  } else {
    const auto root = components(g, x, true);
    for (std::size_t r = g.first_operator(); r < g.first_refill(); ++r) {
      std::vector<char> in_s(g.vertices.size(), 0);
      std::size_t size = 0;
      for (std::size_t v = g.first_operator(); v < g.first_refill(); ++v) {
        if (root[v] == r) {
          in_s[v] = 1;
          ++size;
        }
      }
      if (size == 0) continue;
      LinearConstraint c = capacity_cut(g, in_s, size, capacity);
      const double gap = c.rhs - lhs(c, x);
      if (gap > kSupportEps) found.emplace_back(gap, std::move(c));
    }
  }
  // stable_sort keeps subset order on equal violation, so runs are reproducible
  std::stable_sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  if (found.size() > kMaxCutsPerRound) found.resize(kMaxCutsPerRound);

  std::vector<LinearConstraint> cuts;
  for (auto& f : found) cuts.push_back(std::move(f.second));

  // Every support component must be reachable from the depot.
  const auto root = components(g, x, false);
  for (std::size_t r = 0; r < g.vertices.size(); ++r) {
    if (r == root[g.depot()]) continue;
    bool has_operator = false;
    for (std::size_t v = g.first_operator(); v < g.first_refill(); ++v) has_operator |= root[v] == r;
    if (!has_operator) continue;
    LinearConstraint c;
    c.sense = Sense::kGreaterEqual;
    c.rhs = 1.0;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      if ((root[g.edges[e].u] == r) != (root[g.edges[e].v] == r)) c.terms.emplace_back(e, 1.0);
    }
    cuts.push_back(std::move(c));
  }
  return cuts;
}

}  // namespace

IlpSolution solve_ilp(const RouteGraph& graph, int capacity) {
  if (capacity < 1) throw std::invalid_argument("capacity must be at least 1");
  if (graph.operator_count == 0) throw EmptyScenario("routing needs at least one operator");
  if (graph.refill_count == 0) throw Infeasible("no refill station to end the route at");

  LinearProgram lp;
  std::vector<bool> integer;
  for (const auto& e : graph.edges) {
    lp.add_variable(e.weight, 0.0, e.max_multiplicity);
    integer.push_back(true);
  }
  const std::size_t y0 = lp.variable_count();
  for (std::size_t r = 0; r < graph.refill_count; ++r) {
    lp.add_variable(0.0, 0.0, static_cast<double>(graph.operator_count));
    integer.push_back(true);
  }
  const std::size_t o0 = lp.variable_count();
  for (std::size_t r = 0; r < graph.refill_count; ++r) {
    lp.add_variable(0.0, 0.0, 1.0);
    integer.push_back(true);
  }

  std::vector<LinearConstraint> degree(graph.vertices.size());
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    degree[graph.edges[e].u].terms.emplace_back(e, 1.0);
    degree[graph.edges[e].v].terms.emplace_back(e, 1.0);
  }
  for (std::size_t v = 0; v < graph.vertices.size(); ++v) {
    LinearConstraint c = degree[v];
    c.sense = Sense::kEqual;
    if (v == graph.depot()) {
      c.rhs = 1.0;
    } else if (graph.is_operator(v)) {
      c.rhs = 2.0;
    } else {
      // even degree everywhere except at the station where the route ends
      const std::size_t r = v - graph.first_refill();
      c.terms.emplace_back(y0 + r, -2.0);
      c.terms.emplace_back(o0 + r, -1.0);
      c.rhs = 0.0;
    }
    lp.constraints.push_back(std::move(c));
  }
  LinearConstraint one_end;
  one_end.sense = Sense::kEqual;
  one_end.rhs = 1.0;
  for (std::size_t r = 0; r < graph.refill_count; ++r) one_end.terms.emplace_back(o0 + r, 1.0);
  lp.constraints.push_back(std::move(one_end));

  const std::size_t edge_count = graph.edges.size();
  const MilpResult res = solve_milp(lp, integer, [&](std::span<const double> x, bool) {
    return separate(graph, capacity, x.first(edge_count));
  });
  if (!res.feasible) throw Infeasible("no route satisfies the routing constraints");

  IlpSolution sol;
  sol.nodes = res.nodes;
  sol.cuts = res.cuts;
  sol.multiplicity.resize(edge_count);
  for (std::size_t e = 0; e < edge_count; ++e) {
    sol.multiplicity[e] = static_cast<int>(std::lround(res.x[e]));
    sol.objective += graph.edges[e].weight * sol.multiplicity[e];
  }
  const auto bad = constraint_violations(graph, capacity, sol.multiplicity);
  if (!bad.empty()) throw Error("internal: branch-and-bound returned an infeasible route: " + bad.front());
  return sol;
}

std::vector<std::string> constraint_violations(const RouteGraph& g, int capacity, const std::vector<int>& z) {
  std::vector<std::string> out;
  if (z.size() != g.edges.size()) {
    out.push_back("expected " + std::to_string(g.edges.size()) + " multiplicities, got " + std::to_string(z.size()));
    return out;
  }
  std::vector<int> deg(g.vertices.size(), 0);
  for (std::size_t e = 0; e < z.size(); ++e) {
    if (z[e] < 0 || z[e] > g.edges[e].max_multiplicity) {
      out.push_back("edge " + std::to_string(e) + " multiplicity " + std::to_string(z[e]) + " outside its domain");
    }
    deg[g.edges[e].u] += z[e];
    deg[g.edges[e].v] += z[e];
  }
  if (deg[g.depot()] != 1) out.push_back("depot degree " + std::to_string(deg[g.depot()]) + " != 1");
  for (std::size_t v = g.first_operator(); v < g.first_refill(); ++v) {
    if (deg[v] != 2) out.push_back("operator " + g.vertices[v].id + " degree " + std::to_string(deg[v]) + " != 2");
  }
  int odd = 0;
  for (std::size_t v = g.first_refill(); v < g.vertices.size(); ++v) odd += deg[v] % 2;
  if (odd != 1) out.push_back(std::to_string(odd) + " refill stations with odd degree, expected 1");

  std::vector<double> x(z.begin(), z.end());
  const std::size_t tau = g.operator_count;
  if (tau <= 20) {
    for (std::size_t mask = 1; mask < (std::size_t{1} << tau); ++mask) {
      std::vector<char> in_s(g.vertices.size(), 0);
      std::size_t size = 0;
      for (std::size_t i = 0; i < tau; ++i) {
        if (mask >> i & 1) {
          in_s[g.first_operator() + i] = 1;
          ++size;
        }
      }
      const LinearConstraint c = capacity_cut(g, in_s, size, capacity);
      if (lhs(c, x) < c.rhs) out.push_back("capacity cut violated for operator subset mask " + std::to_string(mask));
    }
  } else {
    // For integral z a violated subset exists iff a maximal operator-only piece violates.
    const auto piece = components(g, x, true);
    for (std::size_t r = g.first_operator(); r < g.first_refill(); ++r) {
      std::vector<char> in_s(g.vertices.size(), 0);
      std::size_t size = 0;
      for (std::size_t v = g.first_operator(); v < g.first_refill(); ++v) {
        if (piece[v] == r) {
          in_s[v] = 1;
          ++size;
        }
      }
      if (size == 0) continue;
      const LinearConstraint c = capacity_cut(g, in_s, size, capacity);
      if (lhs(c, x) < c.rhs) out.push_back("capacity cut violated for the operators joined at " + g.vertices[r].id);
    }
  }
  const auto root = components(g, x, false);
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    if (deg[v] > 0 && root[v] != root[g.depot()]) out.push_back("vertex " + g.vertices[v].id + " not connected to the depot");
  }
  return out;
}

}  // namespace ergoplan::route
