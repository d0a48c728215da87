#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ergoplan/mission/compiler.hpp"
#include "ergoplan/route/plan.hpp"
#include "ergoplan/trajopt/objective.hpp"
#include "ergoplan/trajopt/solver.hpp"
#include "ergoplan/trajopt/validate.hpp"
#include "oracles.hpp"

namespace ergoplan::trajopt {
namespace {

mission::Scenario shifted_small(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  mission::Scenario s = testing::small_scenario();
  s.depot = s.depot + Vec3{u(rng), u(rng), u(rng)};
  s.validate();
  return s;
}

TEST(TrajoptProperty, SatisfyingWarmStartIsNeverLost) {
  std::mt19937_64 rng(501);
  SolverConfig cfg;
  cfg.max_outer_iterations = 3;
  cfg.max_inner_iterations = 60;
  for (int trial = 0; trial < 3; ++trial) {
    const mission::Scenario s = shifted_small(rng);
    const auto warm = route::warm_start(route::plan_route(s), s).trajectory;
    if (!validate(warm, s).pass) continue;
    const PlanResult r = solve(s, mission::compile_formula(s), warm, cfg);
    EXPECT_TRUE(r.satisfied);
    EXPECT_TRUE(validate(r, s).pass);
    for (const auto& round : r.merit_history) {
      for (std::size_t i = 1; i < round.size(); ++i) EXPECT_GE(round[i], round[i - 1]);
    }
  }
}

TEST(TrajoptProperty, ObjectiveGradientOnRandomScenarios) {
  std::mt19937_64 rng(502);
  std::normal_distribution<double> noise(0.0, 0.05);
  int checked = 0;
  for (int attempt = 0; attempt < 40 && checked < 6; ++attempt) {
    auto s = testing::random_scenario(rng);
    if (!s) continue;
    const stl::Formula f = mission::compile_formula(*s);
    const Objective obj(*s, f);
    std::vector<double> x = DecisionVector::from_trajectory(route::warm_start(route::plan_route(*s), *s).trajectory).flatten();
    const std::size_t n = obj.steps();
    for (std::size_t i = 0; i < 3 * n; ++i) x[i] += noise(rng);
    for (std::size_t i = 3 * n; i < 6 * n; ++i) x[i] = x[i - 3 * n] * x[i - 3 * n] + std::abs(noise(rng));
    const auto traj = obj.trajectory(x);
    testing::BruteForce bf{mission::make_signal(traj, mission::derive_payload(traj, *s)), true};
    bf.eval(f, 0);
    // Long trajectories cross many box faces; a central step of 1e-6 moves
    // any predicate by far less than this margin.
    if (bf.min_abs < 1e-4) continue;
    ++checked;
    const ObjectiveValue v = obj.evaluate(x, 100.0);
    std::uniform_int_distribution<std::size_t> coord(0, obj.dimension() - 1);
    for (int c = 0; c < 10; ++c) {
      const std::size_t i = coord(rng);
      const double fd =
          testing::central_difference([&](const std::vector<double>& y) { return obj.evaluate(y, 100.0, false).value; }, x, i);
      EXPECT_LE(testing::relative_error(v.gradient[i], fd), 1e-4) << "coordinate " << i;
    }
  }
  EXPECT_GE(checked, 3);
}

}  // namespace
}  // namespace ergoplan::trajopt
