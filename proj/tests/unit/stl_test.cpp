#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ergoplan/error.hpp"
#include "ergoplan/stl/formula.hpp"
#include "ergoplan/stl/robustness.hpp"
#include "ergoplan/stl/sexpr.hpp"
#include "ergoplan/stl/signal.hpp"
#include "ergoplan/stl/time_grid.hpp"
#include "oracles.hpp"

namespace ergoplan::stl {
namespace {

Signal one_channel(const TimeGrid& grid, std::vector<double> values, const std::string& name = "p") {
  Signal s(grid);
  s.add_channel(name, std::move(values));
  return s;
}

TEST(TimeGrid, RejectsBadParameters) {
  EXPECT_THROW(TimeGrid(0.0, 5), std::invalid_argument);
  EXPECT_THROW(TimeGrid(-0.1, 5), std::invalid_argument);
  EXPECT_THROW(TimeGrid(0.1, 1), std::invalid_argument);
}

TEST(TimeGrid, FromHorizon) {
  const TimeGrid g = TimeGrid::from_horizon(0.05, 23.0);
  EXPECT_EQ(g.sample_count(), 461u);
  EXPECT_EQ(g.steps(), 460u);
  EXPECT_NEAR(g.horizon(), 23.0, 1e-12);
  EXPECT_THROW(TimeGrid::from_horizon(0.05, 23.01), std::invalid_argument);
}

TEST(TimeGrid, SamplesInRoundsTiesDown) {
  const TimeGrid g(1.0, 10);
  EXPECT_EQ(g.samples_in(2.4), 2u);
  EXPECT_EQ(g.samples_in(2.6), 3u);
  EXPECT_EQ(g.samples_in(2.5), 2u);
  EXPECT_EQ(TimeGrid(0.05, 461).samples_in(3.0), 60u);
}

TEST(IndexWindow, Examples) {
  const TimeGrid g(0.05, 461);
  EXPECT_EQ(to_index_window({0.0, 3.0}, 0, g), (IndexWindow{0, 60}));
  EXPECT_EQ(to_index_window({0.0, 0.0}, 7, g), (IndexWindow{7, 7}));
  EXPECT_EQ(to_index_window({0.0, 23.0}, 100, g), (IndexWindow{100, 460}));
}

TEST(IndexWindow, EntirelyPastHorizonIsAnError) {
  const TimeGrid g(0.05, 461);
  EXPECT_THROW(to_index_window({1.0, 2.0}, 450, g), EmptyWindow);
  EXPECT_THROW(to_index_window({0.0, 1.0}, 461, g), std::out_of_range);
}

TEST(Interval, Validation) {
  EXPECT_THROW(Interval::make(-1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(Interval::make(2.0, 1.0), std::invalid_argument);
  EXPECT_NO_THROW(Interval::make(1.0, 1.0));
}

TEST(Signal, ChannelChecks) {
  Signal s(TimeGrid(1.0, 3));
  s.add_channel("a", {1, 2, 3});
  EXPECT_THROW(s.add_channel("a", {1, 2, 3}), std::invalid_argument);
  EXPECT_THROW(s.add_channel("b", {1, 2}), std::invalid_argument);
  EXPECT_EQ(s.find("a"), 0);
  EXPECT_EQ(s.find("zz"), -1);
  EXPECT_THROW((void)s.index_of("zz"), UnknownChannel);
}

TEST(Formula, ArityChecks) {
  const Formula p = Formula::predicate("p", 1.0, 0.0);
  EXPECT_THROW(Formula::conjunction({p}), std::invalid_argument);
  EXPECT_THROW(Formula::disjunction({}), std::invalid_argument);
  EXPECT_EQ(Formula::all_of({p}), p);
}

TEST(ExactRobustness, BoxMembership) {
  // p in (0, 2) with p = 1.5
  const Formula f = Formula::conjunction({Formula::predicate("p", 1.0, 0.0), Formula::predicate("p", -1.0, 2.0)});
  EXPECT_DOUBLE_EQ(eval_robust(f, one_channel(TimeGrid(1.0, 2), {1.5, 0.0}), 0), 0.5);
}

TEST(ExactRobustness, AlwaysIsWindowedMin) {
  const Formula f = Formula::always({0.0, 0.1}, Formula::predicate("p", 1.0, 0.0));
  EXPECT_DOUBLE_EQ(eval_robust(f, one_channel(TimeGrid(0.05, 3), {0.5, 0.2, 0.4}), 0), 0.2);
}

TEST(ExactRobustness, Until) {
  Signal s(TimeGrid(0.05, 3));
  s.add_channel("a", {1.0, 1.0, -1.0});
  s.add_channel("b", {-1.0, 0.5, 2.0});
  const Formula f = Formula::until({0.0, 0.1}, Formula::predicate("a", 1.0, 0.0), Formula::predicate("b", 1.0, 0.0));
  EXPECT_DOUBLE_EQ(eval_robust(f, s, 0), 0.5);
}

TEST(ExactRobustness, NextTakesFirstWindowSample) {
  const Signal s = one_channel(TimeGrid(1.0, 5), {0.0, 1.0, 2.0, 3.0, 4.0});
  const Formula f = Formula::next({1.0, 3.0}, Formula::predicate("p", 1.0, 0.0));
  EXPECT_DOUBLE_EQ(eval_robust(f, s, 0), 1.0);
  EXPECT_DOUBLE_EQ(eval_robust(f, s, 2), 3.0);
}

TEST(ExactRobustness, WindowClippedAtHorizon) {
  const Signal s = one_channel(TimeGrid(1.0, 4), {3.0, 2.0, 1.0, 0.5});
  const Formula f = Formula::always({0.0, 10.0}, Formula::predicate("p", 1.0, 0.0));
  EXPECT_DOUBLE_EQ(eval_robust(f, s, 1), 0.5);
  EXPECT_THROW(eval_robust(Formula::always({5.0, 6.0}, Formula::predicate("p", 1.0, 0.0)), s, 0), EmptyWindow);
}

TEST(ExactRobustness, UnknownChannel) {
  const Signal s = one_channel(TimeGrid(1.0, 2), {0.0, 0.0});
  EXPECT_THROW(eval_robust(Formula::predicate("q", 1.0, 0.0), s, 0), UnknownChannel);
  EXPECT_THROW(eval_agm(Formula::predicate("q", 1.0, 0.0), s, 0), UnknownChannel);
}

TEST(Agm, Aggregators) {
  const std::vector<double> equal{0.5, 0.5};
  EXPECT_NEAR(agm_and(equal), 0.5, 1e-15);
  const std::vector<double> mixed{-1.0, 5.0};
  EXPECT_DOUBLE_EQ(agm_and(mixed), -0.5);
  const std::vector<double> negative{-0.2, -0.2};
  EXPECT_NEAR(agm_or(negative), -0.2, 1e-15);
  const std::vector<double> pos{0.2, 3.0};
  EXPECT_NEAR(agm_and(pos), std::sqrt(1.2 * 4.0) - 1.0, 1e-15);
  EXPECT_THROW(agm_and(std::vector<double>{}), std::invalid_argument);
}

TEST(Agm, MatchesClosedFormOnRandomInputs) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.9, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(1 + trial % 5);
    for (double& x : v) x = u(rng);
    EXPECT_NEAR(agm_and(v), testing::agm_and_reference(v), 1e-12);
  }
}

TEST(Agm, EvaluatorUsesAggregators) {
  const Signal s = one_channel(TimeGrid(1.0, 2), {0.5, 0.0});
  const Formula f = Formula::conjunction({Formula::predicate("p", 1.0, 0.0), Formula::predicate("p", 1.0, 0.0)});
  EXPECT_NEAR(eval_agm(f, s, 0), 0.5, 1e-15);
  const Formula g = Formula::disjunction({Formula::predicate("p", -1.0, 0.3), Formula::predicate("p", -1.0, 0.3)});
  EXPECT_NEAR(eval_agm(g, s, 0), -0.2, 1e-15);
}

TEST(AgmGradient, AffinePredicate) {
  const Signal s = one_channel(TimeGrid(1.0, 3), {0.3, 0.1, 0.2});
  const Formula f = Formula::predicate("p", -2.5, 1.0);
  const std::vector<Coordinate> wrt{{"p", 0}, {"p", 1}};
  const auto g = eval_agm_gradient(f, s, 0, wrt);
  EXPECT_DOUBLE_EQ(g[0], -2.5);
  EXPECT_DOUBLE_EQ(g[1], 0.0);
}

TEST(AgmGradient, ConjunctionOfTwoMargins) {
  Signal s(TimeGrid(1.0, 2));
  s.add_channel("a", {0.3, 0.0});
  s.add_channel("b", {0.7, 0.0});
  const Formula f = Formula::conjunction({Formula::predicate("a", 1.0, 0.0), Formula::predicate("b", 1.0, 0.0)});
  const std::vector<Coordinate> wrt{{"a", 0}, {"b", 0}};
  const auto g = eval_agm_gradient(f, s, 0, wrt);
  EXPECT_NEAR(g[0], 0.5 * std::sqrt(1.7 / 1.3), 1e-14);
  EXPECT_NEAR(g[1], 0.5 * std::sqrt(1.3 / 1.7), 1e-14);
}

TEST(AgmGradient, DenseMatchesSparse) {
  std::mt19937_64 rng(11);
  const TimeGrid grid(0.1, 32);
  testing::RandomFormulaOptions opts;
  opts.max_depth = 3;
  for (int trial = 0; trial < 20; ++trial) {
    const Formula f = testing::random_formula(rng, grid, opts);
    const Signal s = testing::random_signal(rng, grid, opts.channels);
    const SmoothRobustness dense = eval_agm_with_gradient(f, s, 0);
    EXPECT_DOUBLE_EQ(dense.value, eval_agm(f, s, 0));
    std::vector<Coordinate> wrt;
    for (const auto& c : opts.channels) {
      for (std::size_t k = 0; k < grid.sample_count(); ++k) wrt.emplace_back(c, k);
    }
    const auto sparse = eval_agm_gradient(f, s, 0, wrt);
    for (std::size_t i = 0; i < wrt.size(); ++i) EXPECT_EQ(sparse[i], dense.gradient[i]);
  }
}

TEST(Sexpr, RoundTrip) {
  const Formula f = Formula::conjunction(
      {Formula::always({0.0, 23.0}, Formula::predicate("p1", 2.0, -0.5)),
       Formula::until({0.5, 1.0}, Formula::negation(Formula::predicate("c", 1.0, 1.0)),
                      Formula::next({0.05, 0.05}, Formula::eventually({0.0, 3.0}, Formula::predicate("v2", -1.0, 0.1))))});
  const std::string text = to_sexpr(f);
  EXPECT_EQ(parse_sexpr(text), f);
  EXPECT_EQ(to_sexpr(parse_sexpr(text)), text);
  EXPECT_NE(text.find("(always 0.0 23.0"), std::string::npos);
}

TEST(Sexpr, CommentsAndWhitespace) {
  const Formula f = parse_sexpr("; header\n(and\n  (pred 1 (p 2))   ; first\n  (pred -1.5 (q 1) (p -1)))\n");
  ASSERT_EQ(f.op(), Op::kAnd);
  EXPECT_EQ(f.children()[1].pred().coefficients.at("p"), -1.0);
}

TEST(Sexpr, ErrorsCarryLocation) {
  try {
    (void)parse_sexpr("(and (pred 1 (p 1))\n  (bogus 1))");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("2:"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_sexpr(""), ParseError);
  EXPECT_THROW(parse_sexpr("(and (pred 1 (p 1)))"), ParseError);
  EXPECT_THROW(parse_sexpr("(always 2 1 (pred 1))"), ParseError);
  EXPECT_THROW(parse_sexpr("(pred 1 (p x))"), ParseError);
  EXPECT_THROW(parse_sexpr("(pred 1 (p 1) (p 2))"), ParseError);
  EXPECT_THROW(parse_sexpr("(pred 1) extra"), ParseError);
}

}  // namespace
}  // namespace ergoplan::stl
