#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "ergoplan/route/graph.hpp"
#include "ergoplan/route/ilp.hpp"
#include "ergoplan/route/plan.hpp"
#include "oracles.hpp"

namespace ergoplan::route {
namespace {

double dist(const Vec3& a, const Vec3& b) {
  const Vec3 d = a - b;
  return std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
}

TEST(RouteProperty, WeightsAreEuclideanAndMetric) {
  std::mt19937_64 rng(401);
  for (int trial = 0; trial < 20; ++trial) {
    const RouteGraph g = testing::random_graph(rng, 1 + trial % 5, 1 + trial % 3);
    std::map<std::pair<std::size_t, std::size_t>, double> w;
    for (const auto& e : g.edges) {
      EXPECT_NEAR(e.weight, dist(g.vertices[e.u].point, g.vertices[e.v].point), 1e-12);
      w[{e.u, e.v}] = w[{e.v, e.u}] = e.weight;
    }
    for (const auto& [uv, wuv] : w) {
      for (std::size_t x = 0; x < g.vertices.size(); ++x) {
        const auto a = w.find({uv.first, x});
        const auto b = w.find({x, uv.second});
        if (a != w.end() && b != w.end()) EXPECT_LE(wuv, a->second + b->second + 1e-12);
      }
    }
  }
}

TEST(RouteProperty, IlpSolutionsSatisfyEveryConstraint) {
  std::mt19937_64 rng(402);
  for (int trial = 0; trial < 40; ++trial) {
    const int cap = 1 + trial % 3;
    const RouteGraph g = testing::random_graph(rng, 1 + trial % 5, 1 + trial % 2);
    const IlpSolution s = solve_ilp(g, cap);
    const auto violations = constraint_violations(g, cap, s.multiplicity);
    EXPECT_TRUE(violations.empty()) << (violations.empty() ? "" : violations.front());
    double cost = 0.0;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      EXPECT_GE(s.multiplicity[e], 0);
      EXPECT_LE(s.multiplicity[e], g.edges[e].max_multiplicity);
      cost += s.multiplicity[e] * g.edges[e].weight;
    }
    EXPECT_NEAR(cost, s.objective, 1e-9);
  }
}

TEST(RouteProperty, ExtractedWalkUsesEveryEdgeOnce) {
  std::mt19937_64 rng(403);
  for (int trial = 0; trial < 40; ++trial) {
    const int cap = 1 + trial % 2;
    const RouteGraph g = testing::random_graph(rng, 1 + trial % 5, 1 + trial % 2);
    const IlpSolution s = solve_ilp(g, cap);
    const RoutePlan p = extract_route(s, g);
    const int edges = std::accumulate(s.multiplicity.begin(), s.multiplicity.end(), 0);
    EXPECT_EQ(p.visits.size(), static_cast<std::size_t>(edges) + 1);
    EXPECT_EQ(p.visits.front().vertex, g.depot());
    EXPECT_TRUE(g.is_refill(p.visits.back().vertex));
    std::set<std::size_t> ops;
    int load = cap;
    double length = 0.0;
    for (std::size_t i = 1; i < p.visits.size(); ++i) {
      const std::size_t v = p.visits[i].vertex;
      length += dist(p.visits[i - 1].point, p.visits[i].point);
      if (g.is_operator(v)) {
        EXPECT_TRUE(ops.insert(v).second);
        --load;
        EXPECT_GE(load, 0);
      } else {
        load = cap;
      }
    }
    EXPECT_EQ(ops.size(), g.operator_count);
    EXPECT_NEAR(length, s.objective, 1e-9);
    EXPECT_NEAR(p.objective, s.objective, 1e-9);
  }
}

}  // namespace
}  // namespace ergoplan::route
