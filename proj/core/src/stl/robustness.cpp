#include "ergoplan/stl/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <unordered_map>

#include "ergoplan/error.hpp"

namespace ergoplan::stl {

namespace {

/// Weights w_i = d And / d v_i for the AGM conjunction, optionally applied to
/// the negated inputs (for the disjunction). Returns the conjunction value of
/// the (possibly negated) inputs.
double agm_and_impl(std::span<const double> v, bool negate, std::vector<double>* weights) {
  const std::size_t m = v.size();
  const double inv_m = 1.0 / static_cast<double>(m);
  if (weights) weights->assign(m, 0.0);
  if (m == 1) {
    if (weights) (*weights)[0] = 1.0;
    return negate ? -v[0] : v[0];
  }
  bool all_positive = true;
  for (double x : v) {
    if (!((negate ? -x : x) > 0.0)) {
      all_positive = false;
      break;
    }
  }
  if (all_positive) {
    double log_sum = 0.0;
    for (double x : v) log_sum += std::log1p(negate ? -x : x);
    const double mean_log = log_sum * inv_m;
    if (weights) {
      const double g = std::exp(mean_log);
      for (std::size_t i = 0; i < m; ++i) (*weights)[i] = g * inv_m / (1.0 + (negate ? -v[i] : v[i]));
    }
    return std::expm1(mean_log);
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = negate ? -v[i] : v[i];
    if (x <= 0.0) {
      sum += x;
      if (weights) (*weights)[i] = inv_m;
    }
  }
  return sum * inv_m;
}

struct Term {
  std::size_t channel;
  double weight;
};

/// Affine predicate with channel names resolved to signal indices.
struct ResolvedPredicate {
  std::vector<Term> terms;
  double offset;
};

// Semantics policies. Each supplies a Value type and the four primitive
// operations the recursion needs.

struct ExactSemantics {
  using Value = double;
  const Signal* signal;

  Value predicate(const ResolvedPredicate& p, std::size_t k) const {
    double s = p.offset;
    for (const auto& t : p.terms) s += t.weight * signal->channel(t.channel)[k];
    return s;
  }
  static Value negate(const Value& v) { return -v; }
  static Value conj(std::span<const Value* const> xs) {
    double r = std::numeric_limits<double>::infinity();
    for (const Value* x : xs) r = std::min(r, *x);
    return r;
  }
  static Value disj(std::span<const Value* const> xs) {
    double r = -std::numeric_limits<double>::infinity();
    for (const Value* x : xs) r = std::max(r, *x);
    return r;
  }
};

struct AgmSemantics {
  using Value = double;
  const Signal* signal;
  std::vector<double> scratch;

  Value predicate(const ResolvedPredicate& p, std::size_t k) const {
    double s = p.offset;
    for (const auto& t : p.terms) s += t.weight * signal->channel(t.channel)[k];
    return s;
  }
  static Value negate(const Value& v) { return -v; }
  Value conj(std::span<const Value* const> xs) {
    gather(xs);
    return agm_and_impl(scratch, false, nullptr);
  }
  Value disj(std::span<const Value* const> xs) {
    gather(xs);
    return -agm_and_impl(scratch, true, nullptr);
  }

 private:
  void gather(std::span<const Value* const> xs) {
    scratch.resize(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) scratch[i] = *xs[i];
  }
};

/// Value with a sparse gradient over signal coordinates (channel * n + k),
/// entries sorted by coordinate.
struct Dual {
  double value = 0.0;
  std::vector<std::pair<std::size_t, double>> grad;
};

struct AgmDualSemantics {
  using Value = Dual;
  const Signal* signal;
  std::vector<double> values;
  std::vector<double> weights;
  std::vector<double> dense;          // accumulator, one slot per coordinate
  std::vector<char> live;
  std::vector<std::size_t> touched;

  explicit AgmDualSemantics(const Signal* s)
      : signal(s),
        dense(s->channel_count() * s->grid().sample_count(), 0.0),
        live(dense.size(), 0) {}

  Value predicate(const ResolvedPredicate& p, std::size_t k) const {
    Dual d;
    d.value = p.offset;
    const std::size_t n = signal->grid().sample_count();
    for (const auto& t : p.terms) {
      d.value += t.weight * signal->channel(t.channel)[k];
      d.grad.emplace_back(t.channel * n + k, t.weight);
    }
    std::sort(d.grad.begin(), d.grad.end());
    return d;
  }
  static Value negate(const Value& v) {
    Dual d;
    d.value = -v.value;
    d.grad.reserve(v.grad.size());
    for (const auto& [i, g] : v.grad) d.grad.emplace_back(i, -g);
    return d;
  }
  Value conj(std::span<const Value* const> xs) { return aggregate(xs, false); }
  Value disj(std::span<const Value* const> xs) { return aggregate(xs, true); }

 private:
  Value aggregate(std::span<const Value* const> xs, bool is_or) {
    values.resize(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) values[i] = xs[i]->value;
    Dual out;
    const double v = agm_and_impl(values, is_or, &weights);
    out.value = is_or ? -v : v;
    // d(-And(-x))/dx_i = And'_i(-x), so the disjunction reuses the same weights.
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double w = weights[i];
      if (w == 0.0) continue;
      for (const auto& [idx, g] : xs[i]->grad) {
        if (!live[idx]) {
          live[idx] = 1;
          touched.push_back(idx);
        }
        dense[idx] += w * g;
      }
    }
    std::sort(touched.begin(), touched.end());
    out.grad.reserve(touched.size());
    for (std::size_t idx : touched) {
      out.grad.emplace_back(idx, dense[idx]);
      dense[idx] = 0.0;
      live[idx] = 0;
    }
    touched.clear();
    return out;
  }
};

/// Memoized recursive evaluation of the robustness recursion. Values are
/// cached per (node, sample) so shared subformulas and overlapping temporal
/// windows are computed once.
template <class Semantics>
class Evaluator {
 public:
  using Value = typename Semantics::Value;

  Evaluator(const Formula& root, const Signal& signal, Semantics semantics)
      : signal_(signal), sem_(std::move(semantics)) {
    resolve(root);
  }

  const Value& eval(const Formula& f, std::size_t k) {
    auto& slots = memo_[f.node()];
    if (slots.empty()) slots.resize(signal_.grid().sample_count());
    if (!slots[k]) slots[k] = compute(f, k);
    return *slots[k];
  }

 private:
  void resolve(const Formula& f) {
    if (f.op() == Op::kPredicate) {
      if (predicates_.count(f.node())) return;
      ResolvedPredicate r{{}, f.pred().offset};
      for (const auto& [name, w] : f.pred().coefficients) r.terms.push_back({signal_.index_of(name), w});
      predicates_.emplace(f.node(), std::move(r));
      return;
    }
    for (const auto& c : f.children()) resolve(c);
  }

  Value compute(const Formula& f, std::size_t k) {
    const TimeGrid& grid = signal_.grid();
    switch (f.op()) {
      case Op::kPredicate:
        return sem_.predicate(predicates_.at(f.node()), k);
      case Op::kNot:
        return Semantics::negate(eval(f.children()[0], k));
      case Op::kAnd:
      case Op::kOr: {
        std::vector<const Value*> xs;
        xs.reserve(f.children().size());
        for (const auto& c : f.children()) xs.push_back(&eval(c, k));
        return f.op() == Op::kAnd ? sem_.conj(xs) : sem_.disj(xs);
      }
      case Op::kAlways:
      case Op::kEventually: {
        const IndexWindow w = to_index_window(f.interval(), k, grid);
        std::vector<const Value*> xs;
        xs.reserve(w.size());
        for (std::size_t t = w.first; t <= w.last; ++t) xs.push_back(&eval(f.children()[0], t));
        return f.op() == Op::kAlways ? sem_.conj(xs) : sem_.disj(xs);
      }
      case Op::kNext: {
        const IndexWindow w = to_index_window(f.interval(), k, grid);
        return eval(f.children()[0], w.first);
      }
      case Op::kUntil: {
        const IndexWindow w = to_index_window(f.interval(), k, grid);
        const Formula& lhs = f.children()[0];
        const Formula& rhs = f.children()[1];
        // max over t' of min(rhs(t'), min over t'' in [k, t'] of lhs(t''))
        std::vector<Value> pairs;
        pairs.reserve(w.size());
        std::vector<const Value*> prefix;
        for (std::size_t t = k; t < w.first; ++t) prefix.push_back(&eval(lhs, t));
        for (std::size_t t = w.first; t <= w.last; ++t) {
          prefix.push_back(&eval(lhs, t));
          const Value held = sem_.conj(prefix);
          const Value* both[2] = {&eval(rhs, t), &held};
          pairs.push_back(sem_.conj(both));
        }
        std::vector<const Value*> xs;
        xs.reserve(pairs.size());
        for (const auto& p : pairs) xs.push_back(&p);
        return sem_.disj(xs);
      }
    }
    throw Error("unhandled formula node");
  }

  const Signal& signal_;
  Semantics sem_;
  std::unordered_map<const Formula::Node*, ResolvedPredicate> predicates_;
  std::unordered_map<const Formula::Node*, std::vector<std::optional<Value>>> memo_;
};

void check_index(const Signal& signal, std::size_t k) {
  if (k >= signal.grid().sample_count()) {
    throw std::out_of_range("sample index " + std::to_string(k) + " outside signal of " +
                            std::to_string(signal.grid().sample_count()) + " samples");
  }
}

Dual eval_dual(const Formula& formula, const Signal& signal, std::size_t k) {
  check_index(signal, k);
  Evaluator<AgmDualSemantics> ev(formula, signal, AgmDualSemantics(&signal));
  return ev.eval(formula, k);
}

}  // namespace

double agm_and(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("agm_and of nothing");
  return agm_and_impl(values, false, nullptr);
}

double agm_or(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("agm_or of nothing");
  return -agm_and_impl(values, true, nullptr);
}

double eval_robust(const Formula& formula, const Signal& signal, std::size_t k) {
  check_index(signal, k);
  Evaluator<ExactSemantics> ev(formula, signal, ExactSemantics{&signal});
  return ev.eval(formula, k);
}

double eval_agm(const Formula& formula, const Signal& signal, std::size_t k) {
  check_index(signal, k);
  Evaluator<AgmSemantics> ev(formula, signal, AgmSemantics{&signal, {}});
  return ev.eval(formula, k);
}

std::vector<double> eval_agm_gradient(const Formula& formula, const Signal& signal, std::size_t k,
                                      std::span<const Coordinate> wrt) {
  const Dual d = eval_dual(formula, signal, k);
  const std::size_t n = signal.grid().sample_count();
  std::vector<double> out;
  out.reserve(wrt.size());
  for (const auto& [name, sample] : wrt) {
    if (sample >= n) throw std::out_of_range("gradient coordinate sample " + std::to_string(sample));
    const std::size_t idx = signal.index_of(name) * n + sample;
    const auto it = std::lower_bound(d.grad.begin(), d.grad.end(), std::make_pair(idx, -std::numeric_limits<double>::infinity()));
    out.push_back(it != d.grad.end() && it->first == idx ? it->second : 0.0);
  }
  return out;
}

SmoothRobustness eval_agm_with_gradient(const Formula& formula, const Signal& signal, std::size_t k) {
  const Dual d = eval_dual(formula, signal, k);
  SmoothRobustness out;
  out.value = d.value;
  out.gradient.assign(signal.channel_count() * signal.grid().sample_count(), 0.0);
  for (const auto& [idx, g] : d.grad) out.gradient[idx] = g;
  return out;
}

}  // namespace ergoplan::stl
