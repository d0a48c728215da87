#pragma once

#include <initializer_list>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ergoplan/stl/time_grid.hpp"

namespace ergoplan::stl {

/// Closed time interval in seconds, relative to the evaluation instant.
struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  /// Throws std::invalid_argument unless 0 <= lower <= upper.
  static Interval make(double lower, double upper);

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Inclusive range of sample indices.
struct IndexWindow {
  std::size_t first = 0;
  std::size_t last = 0;

  [[nodiscard]] std::size_t size() const { return last - first + 1; }
  friend bool operator==(const IndexWindow&, const IndexWindow&) = default;
};

/// Maps [k + lower, k + upper] onto sample indices, clipped at the horizon.
/// Throws EmptyWindow when the whole window lies past the last sample and
/// std::out_of_range when k itself is outside the grid.
IndexWindow to_index_window(const Interval& interval, std::size_t k, const TimeGrid& grid);

/// Affine predicate mu(x, t_k) = sum_c w_c * channel_c[k] + offset.
struct Predicate {
  std::map<std::string, double> coefficients;
  double offset = 0.0;

  friend bool operator==(const Predicate&, const Predicate&) = default;
};

enum class Op { kPredicate, kNot, kAnd, kOr, kAlways, kEventually, kNext, kUntil };

/// Immutable STL syntax tree. Copies share structure.
class Formula {
 public:
  struct Node {
    Op op;
    Predicate predicate;        // kPredicate only
    Interval interval;          // temporal operators only
    std::vector<Formula> children;
  };

  static Formula predicate(Predicate p);
  /// Predicate on a single channel: weight * channel + offset.
  static Formula predicate(const std::string& channel, double weight, double offset);
  static Formula negation(Formula f);
  /// Conjunction / disjunction of at least two formulas (std::invalid_argument otherwise).
  static Formula conjunction(std::vector<Formula> children);
  static Formula disjunction(std::vector<Formula> children);
  static Formula always(Interval i, Formula f);
  static Formula eventually(Interval i, Formula f);
  static Formula next(Interval i, Formula f);
  static Formula until(Interval i, Formula lhs, Formula rhs);

  /// Like conjunction/disjunction but a single child is returned as is.
  static Formula all_of(std::vector<Formula> children);
  static Formula any_of(std::vector<Formula> children);

  [[nodiscard]] Op op() const { return node_->op; }
  [[nodiscard]] const Predicate& pred() const { return node_->predicate; }
  [[nodiscard]] const Interval& interval() const { return node_->interval; }
  [[nodiscard]] std::span<const Formula> children() const { return node_->children; }
  [[nodiscard]] const Node* node() const { return node_.get(); }

  /// Structural equality (not pointer identity).
  friend bool operator==(const Formula& a, const Formula& b);

  [[nodiscard]] std::size_t depth() const;
  [[nodiscard]] std::size_t size() const;

 private:
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

}  // namespace ergoplan::stl
