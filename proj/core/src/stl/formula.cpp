#include "ergoplan/stl/formula.hpp"

#include <algorithm>
#include <stdexcept>

#include "ergoplan/error.hpp"

namespace ergoplan::stl {

Interval Interval::make(double lower, double upper) {
  if (!(lower >= 0.0) || !(lower <= upper)) {
    throw std::invalid_argument("invalid interval [" + std::to_string(lower) + ", " + std::to_string(upper) + "]");
  }
  return Interval{lower, upper};
}

IndexWindow to_index_window(const Interval& interval, std::size_t k, const TimeGrid& grid) {
  const std::size_t n = grid.sample_count();
  if (k >= n) throw std::out_of_range("sample index " + std::to_string(k) + " outside grid of " + std::to_string(n));
  const std::size_t first = k + grid.samples_in(interval.lower);
  const std::size_t last = k + grid.samples_in(interval.upper);
  if (first > n - 1) {
    throw EmptyWindow("window [" + std::to_string(first) + ", " + std::to_string(last) +
                      "] lies beyond the last sample " + std::to_string(n - 1));
  }
  return IndexWindow{first, std::min(last, n - 1)};
}

namespace {

Formula::Node make_node(Op op) { return Formula::Node{op, {}, {}, {}}; }

}  // namespace

Formula Formula::predicate(Predicate p) {
  auto node = make_node(Op::kPredicate);
  node.predicate = std::move(p);
  return Formula(std::make_shared<const Node>(std::move(node)));
}

Formula Formula::predicate(const std::string& channel, double weight, double offset) {
  Predicate p;
  p.coefficients.emplace(channel, weight);
  p.offset = offset;
  return predicate(std::move(p));
}

Formula Formula::negation(Formula f) {
  auto node = make_node(Op::kNot);
  node.children.push_back(std::move(f));
  return Formula(std::make_shared<const Node>(std::move(node)));
}

Formula Formula::conjunction(std::vector<Formula> children) {
  if (children.size() < 2) throw std::invalid_argument("conjunction needs at least two operands");
  auto node = make_node(Op::kAnd);
  node.children = std::move(children);
  return Formula(std::make_shared<const Node>(std::move(node)));
}

Formula Formula::disjunction(std::vector<Formula> children) {
  if (children.size() < 2) throw std::invalid_argument("disjunction needs at least two operands");
  auto node = make_node(Op::kOr);
  node.children = std::move(children);
  return Formula(std::make_shared<const Node>(std::move(node)));
}

Formula Formula::all_of(std::vector<Formula> children) {
  if (children.empty()) throw std::invalid_argument("all_of of nothing");
  if (children.size() == 1) return std::move(children.front());
  return conjunction(std::move(children));
}

Formula Formula::any_of(std::vector<Formula> children) {
  if (children.empty()) throw std::invalid_argument("any_of of nothing");
  if (children.size() == 1) return std::move(children.front());
  return disjunction(std::move(children));
}

namespace {

Formula::Node temporal(Op op, Interval i, std::vector<Formula> children) {
  Interval::make(i.lower, i.upper);  // validates
  auto node = make_node(op);
  node.interval = i;
  node.children = std::move(children);
  return node;
}

}  // namespace

Formula Formula::always(Interval i, Formula f) {
  return Formula(std::make_shared<const Node>(temporal(Op::kAlways, i, {std::move(f)})));
}

Formula Formula::eventually(Interval i, Formula f) {
  return Formula(std::make_shared<const Node>(temporal(Op::kEventually, i, {std::move(f)})));
}

Formula Formula::next(Interval i, Formula f) {
  return Formula(std::make_shared<const Node>(temporal(Op::kNext, i, {std::move(f)})));
}

Formula Formula::until(Interval i, Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(temporal(Op::kUntil, i, {std::move(lhs), std::move(rhs)})));
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.op() != b.op()) return false;
  if (a.op() == Op::kPredicate) return a.pred() == b.pred();
  if (a.op() != Op::kNot && a.op() != Op::kAnd && a.op() != Op::kOr && !(a.interval() == b.interval())) {
    return false;
  }
  return std::equal(a.children().begin(), a.children().end(), b.children().begin(), b.children().end());
}

std::size_t Formula::depth() const {
  std::size_t d = 0;
  for (const auto& c : children()) d = std::max(d, c.depth());
  return d + 1;
}

std::size_t Formula::size() const {
  std::size_t s = 1;
  for (const auto& c : children()) s += c.size();
  return s;
}

}  // namespace ergoplan::stl
