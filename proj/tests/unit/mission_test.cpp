#include <cmath>

#include <gtest/gtest.h>

#include "ergoplan/error.hpp"
#include "ergoplan/mission/compiler.hpp"
#include "ergoplan/mission/payload.hpp"
#include "ergoplan/mission/scenario.hpp"
#include "ergoplan/mission/scenario_io.hpp"
#include "ergoplan/route/plan.hpp"
#include "ergoplan/stl/robustness.hpp"
#include "ergoplan/stl/sexpr.hpp"
#include "oracles.hpp"

namespace ergoplan::mission {
namespace {

const std::string kMockup = std::string(ERGOPLAN_SCENARIO_DIR) + "/mockup.json";

dynamics::Trajectory from_points(const stl::TimeGrid& grid, const std::vector<Vec3>& pts) {
  dynamics::Trajectory t;
  t.grid = grid;
  for (int j = 0; j < 3; ++j) {
    t.positions[j].resize(pts.size());
    t.velocities[j].assign(pts.size(), 0.0);
    t.accelerations[j].assign(pts.size() - 1, 0.0);
    for (std::size_t k = 0; k < pts.size(); ++k) t.positions[j][k] = pts[k][j];
  }
  return t;
}

double clause(const MissionFormula& m, const stl::Signal& s, const std::string& name) {
  for (const auto& [n, f] : m.clauses) {
    if (n == name) return stl::eval_robust(f, s, 0);
  }
  throw std::runtime_error("no clause " + name);
}

double robustness(const Scenario& s, const dynamics::Trajectory& t) {
  return stl::eval_robust(compile_formula(s), make_signal(t, derive_payload(t, s)), 0);
}

TEST(Geometry, BoxPredicates) {
  const Box3 b{{0, 0, 0}, {1, 2, 3}};
  EXPECT_TRUE(b.contains(Vec3{0.5, 1, 1}));
  EXPECT_FALSE(b.contains(Vec3{0.0, 1, 1}));  // open box
  EXPECT_TRUE(b.intersects(Box3{{0.5, 0.5, 0.5}, {4, 4, 4}}));
  EXPECT_FALSE(b.intersects(Box3{{1, 0, 0}, {2, 1, 1}}));  // touching faces only
  EXPECT_TRUE(segment_intersects({-1, 1, 1}, {2, 1, 1}, b));
  EXPECT_FALSE(segment_intersects({-1, 5, 1}, {2, 5, 1}, b));
  EXPECT_THROW(Box3::from_bounds({0, 0, 0}, {1, 0, 1}), InvalidScenario);
}

TEST(BehindRegion, FacingNegativeX) {
  const Box3 b = behind_region({0, 0, 0}, M_PI, 1.0, 1.0, 1.0);
  EXPECT_NEAR(b.lower[0], 0.0, 1e-12);
  EXPECT_NEAR(b.upper[0], 1.0, 1e-12);
  EXPECT_NEAR(b.lower[1], -0.5, 1e-12);
  EXPECT_NEAR(b.upper[1], 0.5, 1e-12);
  EXPECT_NEAR(b.lower[2], -0.5, 1e-12);
  EXPECT_NEAR(b.upper[2], 0.5, 1e-12);
}

TEST(BehindRegion, FacingPositiveXIsMirrored) {
  const Box3 b = behind_region({0, 0, 0}, 0.0, 1.0, 1.0, 1.0);
  EXPECT_NEAR(b.lower[0], -1.0, 1e-12);
  EXPECT_NEAR(b.upper[0], 0.0, 1e-12);
}

TEST(BehindRegion, OffAxisHeadingRejected) {
  EXPECT_THROW(behind_region({0, 0, 0}, M_PI / 4.0, 1.0, 1.0, 1.0), HeadingNotAxisAligned);
  EXPECT_THROW(behind_region({0, 0, 0}, 0.0, 0.0, 1.0, 1.0), InvalidScenario);
  EXPECT_NO_THROW(behind_region({0, 0, 0}, -M_PI / 2.0, 1.0, 1.0, 1.0));
}

TEST(Operator, DerivedRegions) {
  const Operator op = make_operator("A", {2.5, 0, 1}, M_PI, {Direction::kLeft, Direction::kRight});
  EXPECT_EQ(op.handover_box.center(), (Vec3{1.5, 0, 1}));
  ASSERT_EQ(op.preferences.size(), 2u);
  // Facing -x, the operator's left is -y.
  EXPECT_NEAR(op.preferences[0].box.center()[1], -0.5, 1e-12);
  EXPECT_NEAR(op.preferences[1].box.center()[1], 0.5, 1e-12);
  for (const auto& p : op.preferences) EXPECT_FALSE(p.box.intersects(op.behind_box));
}

TEST(ScenarioIo, LoadsMockup) {
  const Scenario s = load_scenario(kMockup);
  EXPECT_EQ(s.operators.size(), 2u);
  EXPECT_EQ(s.refill_stations.size(), 1u);
  EXPECT_EQ(s.grid.sample_count(), 461u);
  EXPECT_EQ(s.capacity, 1);
  EXPECT_EQ(s.limits.v_max, (Vec3{1.1, 1.1, 1.1}));
  EXPECT_EQ(s.operators[0].combinator, PrefCombinator::kAny);
}

TEST(ScenarioIo, SyntaxErrorHasLine) {
  try {
    (void)parse_scenario("{\n  \"workspace\": ,\n}");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(ScenarioIo, SemanticErrorsNameTheKey) {
  std::string text = testing::read_file(kMockup);
  auto expect_key = [](const std::string& doc, const std::string& key) {
    try {
      (void)parse_scenario(doc);
      FAIL() << "expected an error naming " << key;
    } catch (const Error& e) {
      EXPECT_NE(std::string(e.what()).find(key), std::string::npos) << e.what();
    }
  };
  auto replace = [&](const std::string& from, const std::string& to) {
    std::string t = text;
    const auto pos = t.find(from);
    EXPECT_NE(pos, std::string::npos) << from;
    return t.replace(pos, from.size(), to);
  };
  expect_key(replace("\"capacity\": 1", "\"capacity\": 0"), "capacity");
  expect_key(replace("\"capacity\": 1", "\"capacity\": 1.5"), "capacity");
  expect_key(replace("\"T_N\": 23.0", "\"T_N\": 23.01"), "times");
  expect_key(replace("\"pref_combinator\": \"any\"", "\"pref_combinator\": \"most\""), "pref_combinator");
  expect_key(replace("[\"front\"]", "[\"behind\"]"), "operators[1].preferences[0]");
  expect_key(replace("3.141592653589793", "0.7"), "operators[0].heading_rad");
  expect_key(replace("\"depot\": [1.5, -1.5, 1.0]", "\"depot\": [9.0, 0.0, 1.0]"), "depot");
  expect_key(replace("\"energy_weight\": 0.02", "\"energy_weight\": -1"), "energy_weight");
  expect_key(replace("\"limits\": {\"v_max\": 1.1,", "\"limits\": {"), "limits.v_max");
}

TEST(ScenarioIo, OverridesAndDefaults) {
  const Scenario s = parse_scenario(R"({
    "workspace": {"lower": [-5, -5, 0], "upper": [5, 5, 4]},
    "operators": [{"position": [2, 0, 1], "heading_rad": 1.5707963267948966, "preferences": ["front", "above"],
                   "pref_combinator": "all", "reach": 0.8, "handover_size": 0.6,
                   "behind": {"depth": 0.5, "width": 0.7, "height": 2.0}}],
    "refill_stations": [{"lower": [-1, -1, 0.5], "upper": [0, 0, 1.5]}],
    "depot": [0, 2, 1], "capacity": 2,
    "times": {"T_N": 10, "T_han": 1, "T_rs": 1, "T_s": 0.1},
    "limits": {"v_max": [1, 1, 0.5], "a_max": 2}
  })");
  const Operator& op = s.operators[0];
  EXPECT_EQ(op.id, "HO1");
  EXPECT_EQ(op.combinator, PrefCombinator::kAll);
  EXPECT_NEAR(op.handover_box.center()[1], 0.8, 1e-12);
  EXPECT_NEAR(op.handover_box.half_size()[0], 0.3, 1e-12);
  EXPECT_NEAR(op.behind_box.upper[2] - op.behind_box.lower[2], 2.0, 1e-12);
  EXPECT_EQ(s.refill_stations[0].id, "RS1");
  EXPECT_EQ(s.refill_stations[0].home, s.refill_stations[0].box);
  EXPECT_DOUBLE_EQ(s.energy_weight, 0.1);
  EXPECT_EQ(s.limits.v_max, (Vec3{1, 1, 0.5}));
}

TEST(Compile, ClauseNamesAndGolden) {
  const Scenario s = load_scenario(kMockup);
  const MissionFormula m = compile_mission(s);
  std::vector<std::string> names;
  for (const auto& [n, f] : m.clauses) names.push_back(n);
  EXPECT_EQ(names, (std::vector<std::string>{"ws", "obs", "beh", "han", "rs", "hm"}));
  const std::string golden = testing::read_file(std::string(ERGOPLAN_FIXTURE_DIR) + "/mockup_formula.stl");
  EXPECT_EQ(stl::to_sexpr(m.formula) + "\n", golden);
  EXPECT_EQ(stl::parse_sexpr(golden), m.formula);
}

TEST(Compile, NoObstaclesOmitsClauseAndHoverFails) {
  Scenario s = load_scenario(kMockup);
  s.obstacles.clear();
  const MissionFormula m = compile_mission(s);
  for (const auto& [n, f] : m.clauses) EXPECT_NE(n, "obs");
  const auto hover = from_points(s.grid, std::vector<Vec3>(s.grid.sample_count(), Vec3{3.0, 2.0, 2.0}));
  const stl::Signal sig = make_signal(hover, derive_payload(hover, s));
  EXPECT_GT(clause(m, sig, "ws"), 0.0);
  EXPECT_LT(clause(m, sig, "han"), 0.0);
  EXPECT_LT(stl::eval_robust(m.formula, sig, 0), 0.0);
}

TEST(Compile, RequiresRefillStation) {
  Scenario s = load_scenario(kMockup);
  s.refill_stations.clear();
  EXPECT_THROW(compile_formula(s), InvalidScenario);
}

TEST(Compile, WarmStartSatisfiesMockupAndShiftedCopyCrossesObstacle) {
  const Scenario s = load_scenario(kMockup);
  const MissionFormula m = compile_mission(s);
  const auto warm = route::warm_start(route::plan_route(s), s);
  ASSERT_FALSE(warm.horizon_exceeded);
  EXPECT_GT(robustness(s, warm.trajectory), 0.0);

  dynamics::Trajectory shifted = warm.trajectory;
  for (double& y : shifted.positions[1]) y += 1.5;
  const stl::Signal sig = make_signal(shifted, derive_payload(shifted, s));
  EXPECT_LT(clause(m, sig, "obs"), 0.0);
  EXPECT_LT(stl::eval_robust(m.formula, sig, 0), 0.0);
}

TEST(Compile, LeavingWorkspaceOnceBreaksWs) {
  const Scenario s = load_scenario(kMockup);
  const MissionFormula m = compile_mission(s);
  auto t = route::warm_start(route::plan_route(s), s).trajectory;
  t.positions[2][200] = 3.2;
  const stl::Signal sig = make_signal(t, derive_payload(t, s));
  EXPECT_LT(clause(m, sig, "ws"), 0.0);
}

TEST(Compile, SignalChannels) {
  const Scenario s = testing::small_scenario();
  const auto t = from_points(s.grid, std::vector<Vec3>(s.grid.sample_count(), Vec3{0, 0, 1}));
  const stl::Signal sig = make_signal(t, derive_payload(t, s));
  EXPECT_EQ(sig.channel_names(), (std::vector<std::string>{"p1", "p2", "p3", "v1", "v2", "v3", "c"}));
  EXPECT_EQ(sig.channel("c")[0], 1.0);
  EXPECT_THROW(make_signal(t, PayloadSignal{{1, 1}}), LengthMismatch);
}

TEST(Payload, NeverEnteringAnyBoxKeepsCapacity) {
  const Scenario s = testing::small_scenario();
  const auto t = from_points(s.grid, std::vector<Vec3>(s.grid.sample_count(), s.depot));
  for (int c : derive_payload(t, s).values) EXPECT_EQ(c, 1);
}

TEST(Payload, HandoverThenRefill) {
  const Scenario s = testing::small_scenario();  // T_s 0.1, T_han = T_rs = 0.3 s -> 4 samples
  std::vector<Vec3> pts(s.grid.sample_count(), Vec3{-0.5, 0.0, 1.0});
  for (std::size_t k = 0; k < 3; ++k) pts[k] = s.depot;
  for (std::size_t k = 3; k < 7; ++k) pts[k] = {0.6, 0.0, 1.0};  // handover box only
  const auto v = derive_payload(from_points(s.grid, pts), s).values;
  for (std::size_t k = 0; k <= 6; ++k) EXPECT_EQ(v[k], 1) << k;
  for (std::size_t k = 7; k <= 10; ++k) EXPECT_EQ(v[k], 0) << k;
  for (std::size_t k = 11; k < v.size(); ++k) EXPECT_EQ(v[k], 1) << k;
}

TEST(Payload, ShortHoldDoesNotCount) {
  const Scenario s = testing::small_scenario();
  std::vector<Vec3> pts(s.grid.sample_count(), s.depot);
  for (std::size_t k = 3; k < 6; ++k) pts[k] = {0.6, 0.0, 1.0};
  for (int c : derive_payload(from_points(s.grid, pts), s).values) EXPECT_EQ(c, 1);
}

TEST(Payload, TwoHandoversWithoutRefillEmptyTheVehicle) {
  const Scenario s = load_scenario(kMockup);
  const std::size_t n = s.grid.sample_count();
  std::vector<Vec3> pts(n, s.operators[1].handover_box.center());
  for (std::size_t k = 0; k < 100; ++k) pts[k] = s.operators[0].handover_box.center();
  const auto t = from_points(s.grid, pts);
  const auto v = derive_payload(t, s).values;
  EXPECT_EQ(v[60], 1);
  EXPECT_EQ(v[61], 0);
  EXPECT_EQ(v.back(), 0);
  // Once empty, the refill requirement evaluated from then on has no witness.
  const MissionFormula m = compile_mission(s);
  const stl::Signal sig = make_signal(t, derive_payload(t, s));
  for (const auto& [name, f] : m.clauses) {
    if (name != "rs") continue;
    EXPECT_LT(stl::eval_robust(f, sig, 61), 0.0);
  }
}

TEST(Translation, SatisfactionSurvivesRigidShift) {
  const Scenario s = load_scenario(kMockup);
  const auto warm = route::warm_start(route::plan_route(s), s).trajectory;
  const double rho = robustness(s, warm);
  ASSERT_GT(rho, 0.0);
  const Vec3 offset{10.0, -4.0, 2.5};
  const Scenario moved = translated(s, offset);
  auto t = warm;
  for (int j = 0; j < 3; ++j) {
    for (double& p : t.positions[j]) p += offset[j];
  }
  EXPECT_NEAR(robustness(moved, t), rho, 1e-9);
}

}  // namespace
}  // namespace ergoplan::mission
