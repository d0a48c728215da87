#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ergoplan/stl/robustness.hpp"
#include "ergoplan/stl/sexpr.hpp"
#include "oracles.hpp"

namespace ergoplan::stl {
namespace {

const TimeGrid kGrid(0.1, 64);

// Qualitative semantics, evaluated directly from the definitions.
bool holds(const Formula& f, const Signal& sig, std::size_t k) {
  switch (f.op()) {
    case Op::kPredicate: {
      double v = f.pred().offset;
      for (const auto& [name, w] : f.pred().coefficients) v += w * sig.channel(name)[k];
      return v > 0.0;
    }
    case Op::kNot:
      return !holds(f.children()[0], sig, k);
    case Op::kAnd:
      for (const auto& c : f.children()) {
        if (!holds(c, sig, k)) return false;
      }
      return true;
    case Op::kOr:
      for (const auto& c : f.children()) {
        if (holds(c, sig, k)) return true;
      }
      return false;
    case Op::kAlways:
    case Op::kEventually: {
      const IndexWindow w = to_index_window(f.interval(), k, sig.grid());
      const bool want = f.op() == Op::kEventually;
      for (std::size_t t = w.first; t <= w.last; ++t) {
        if (holds(f.children()[0], sig, t) == want) return want;
      }
      return !want;
    }
    case Op::kNext:
      return holds(f.children()[0], sig, to_index_window(f.interval(), k, sig.grid()).first);
    case Op::kUntil: {
      const IndexWindow w = to_index_window(f.interval(), k, sig.grid());
      for (std::size_t t = w.first; t <= w.last; ++t) {
        bool lhs = true;
        for (std::size_t s = k; s <= t && lhs; ++s) lhs = holds(f.children()[0], sig, s);
        if (lhs && holds(f.children()[1], sig, t)) return true;
      }
      return false;
    }
  }
  return false;
}

bool negation_free(const Formula& f) {
  if (f.op() == Op::kNot) return false;
  for (const auto& c : f.children()) {
    if (!negation_free(c)) return false;
  }
  return true;
}

Formula raise_offsets(const Formula& f, double delta) {
  std::vector<Formula> kids;
  for (const auto& c : f.children()) kids.push_back(raise_offsets(c, delta));
  switch (f.op()) {
    case Op::kPredicate: {
      Predicate p = f.pred();
      p.offset += delta;
      return Formula::predicate(std::move(p));
    }
    case Op::kNot:
      return Formula::negation(kids[0]);
    case Op::kAnd:
      return Formula::conjunction(kids);
    case Op::kOr:
      return Formula::disjunction(kids);
    case Op::kAlways:
      return Formula::always(f.interval(), kids[0]);
    case Op::kEventually:
      return Formula::eventually(f.interval(), kids[0]);
    case Op::kNext:
      return Formula::next(f.interval(), kids[0]);
    case Op::kUntil:
      return Formula::until(f.interval(), kids[0], kids[1]);
  }
  return f;
}

struct Case {
  Formula formula;
  Signal signal;
};

Case random_case(std::mt19937_64& rng) {
  const testing::RandomFormulaOptions opts;
  return {testing::random_formula(rng, kGrid, opts), testing::random_signal(rng, kGrid, opts.channels)};
}

TEST(StlProperty, ExactMatchesBruteForce) {
  std::mt19937_64 rng(101);
  for (int i = 0; i < 200; ++i) {
    const Case c = random_case(rng);
    testing::BruteForce bf{c.signal};
    EXPECT_DOUBLE_EQ(eval_robust(c.formula, c.signal, 0), bf.eval(c.formula, 0)) << to_sexpr(c.formula);
  }
}

TEST(StlProperty, SmoothMatchesReferenceAggregators) {
  std::mt19937_64 rng(102);
  for (int i = 0; i < 200; ++i) {
    const Case c = random_case(rng);
    testing::BruteForce bf{c.signal, true};
    const double want = bf.eval(c.formula, 0);
    EXPECT_NEAR(eval_agm(c.formula, c.signal, 0), want, 1e-9 * (1.0 + std::abs(want))) << to_sexpr(c.formula);
  }
}

TEST(StlProperty, SignIsSound) {
  std::mt19937_64 rng(103);
  int decided = 0;
  for (int i = 0; i < 300; ++i) {
    const Case c = random_case(rng);
    const double rho = eval_robust(c.formula, c.signal, 0);
    if (rho > 0.0) {
      EXPECT_TRUE(holds(c.formula, c.signal, 0)) << to_sexpr(c.formula);
      ++decided;
    } else if (rho < 0.0) {
      EXPECT_FALSE(holds(c.formula, c.signal, 0)) << to_sexpr(c.formula);
      ++decided;
    }
    testing::BruteForce bf{c.signal, true};
    const double smooth = bf.eval(c.formula, 0);
    if (bf.min_abs >= 1e-9) {
      EXPECT_EQ(smooth > 0.0, rho > 0.0) << to_sexpr(c.formula);
    }
  }
  EXPECT_GT(decided, 250);
}

TEST(StlProperty, NegationFlipsSign) {
  std::mt19937_64 rng(104);
  for (int i = 0; i < 100; ++i) {
    const Case c = random_case(rng);
    const Formula neg = Formula::negation(c.formula);
    EXPECT_EQ(eval_robust(neg, c.signal, 0), -eval_robust(c.formula, c.signal, 0));
    EXPECT_EQ(eval_agm(neg, c.signal, 0), -eval_agm(c.formula, c.signal, 0));
  }
}

TEST(StlProperty, AlwaysEventuallyDuality) {
  std::mt19937_64 rng(105);
  for (int i = 0; i < 100; ++i) {
    const Case c = random_case(rng);
    const Interval iv{0.0, 0.1 * static_cast<double>(i % 7)};
    const Formula lhs = Formula::always(iv, c.formula);
    const Formula rhs = Formula::negation(Formula::eventually(iv, Formula::negation(c.formula)));
    EXPECT_DOUBLE_EQ(eval_robust(lhs, c.signal, 0), eval_robust(rhs, c.signal, 0));
    EXPECT_NEAR(eval_agm(lhs, c.signal, 0), eval_agm(rhs, c.signal, 0), 1e-12);
  }
}

TEST(StlProperty, MonotoneInPredicateOffsets) {
  std::mt19937_64 rng(106);
  std::uniform_real_distribution<double> delta(0.0, 0.3);
  int checked = 0;
  while (checked < 100) {
    const Case c = random_case(rng);
    if (!negation_free(c.formula)) continue;
    ++checked;
    const Formula up = raise_offsets(c.formula, delta(rng));
    EXPECT_GE(eval_robust(up, c.signal, 0), eval_robust(c.formula, c.signal, 0));
    EXPECT_GE(eval_agm(up, c.signal, 0), eval_agm(c.formula, c.signal, 0) - 1e-12);
  }
}

TEST(StlProperty, SmoothGradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(107);
  std::uniform_int_distribution<std::size_t> sample(0, kGrid.sample_count() - 1);
  int checked = 0;
  for (int attempt = 0; attempt < 2000 && checked < 40; ++attempt) {
    Case c = random_case(rng);
    testing::BruteForce bf{c.signal, true};
    bf.eval(c.formula, 0);
    if (bf.min_abs < 1e-3) continue;
    ++checked;
    std::vector<Coordinate> wrt;
    for (const auto& name : c.signal.channel_names()) wrt.emplace_back(name, sample(rng));
    const std::vector<double> g = eval_agm_gradient(c.formula, c.signal, 0, wrt);
    for (std::size_t i = 0; i < wrt.size(); ++i) {
      const std::size_t ch = c.signal.index_of(wrt[i].first);
      auto f = [&](const std::vector<double>& x) {
        Signal s = c.signal;
        s.mutable_channel(ch)[wrt[i].second] = x[0];
        return eval_agm(c.formula, s, 0);
      };
      const double fd = testing::central_difference(f, {c.signal.channel(ch)[wrt[i].second]}, 0);
      EXPECT_LE(testing::relative_error(g[i], fd), 1e-4) << to_sexpr(c.formula);
    }
  }
  EXPECT_EQ(checked, 40);
}

TEST(StlProperty, TextFormRoundTrips) {
  std::mt19937_64 rng(108);
  for (int i = 0; i < 200; ++i) {
    const Case c = random_case(rng);
    const Formula back = parse_sexpr(to_sexpr(c.formula));
    EXPECT_TRUE(back == c.formula) << to_sexpr(c.formula);
    EXPECT_EQ(to_sexpr(back), to_sexpr(c.formula));
  }
}

}  // namespace
}  // namespace ergoplan::stl
