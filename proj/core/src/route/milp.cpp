#include "ergoplan/route/milp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace ergoplan::route {

namespace {

constexpr double kPivotEps = 1e-9;
constexpr double kFeasibilityEps = 1e-7;
constexpr std::size_t kMaxPivots = 200000;

/// Row-major simplex tableau; the last column holds the right-hand side.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * (cols + 1), 0.0), basis_(rows, 0) {}

  double& at(std::size_t i, std::size_t j) { return a_[i * (cols_ + 1) + j]; }
  double& rhs(std::size_t i) { return at(i, cols_); }
  std::size_t& basis(std::size_t i) { return basis_[i]; }
  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }

  void pivot(std::size_t r, std::size_t c, std::vector<double>& obj) {
    double* pr = &at(r, 0);
    const double p = pr[c];
    for (std::size_t j = 0; j <= cols_; ++j) pr[j] /= p;
    pr[c] = 1.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == r) continue;
      double* row = &at(i, 0);
      const double f = row[c];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) row[j] -= f * pr[j];
      row[c] = 0.0;
    }
    const double f = obj[c];
    if (f != 0.0) {
      for (std::size_t j = 0; j <= cols_; ++j) obj[j] -= f * pr[j];
      obj[c] = 0.0;
    }
    basis_[r] = c;
  }

  /// Minimizes with reduced costs in `obj` (last entry is minus the objective)
  /// over columns below `allowed`. Returns false when unbounded.
  bool optimize(std::vector<double>& obj, std::size_t allowed) {
    for (std::size_t iter = 0; iter < kMaxPivots; ++iter) {
      std::size_t enter = allowed;
      for (std::size_t j = 0; j < allowed; ++j) {
        if (obj[j] < -kPivotEps) {
          enter = j;
          break;
        }
      }
      if (enter == allowed) return true;
      std::size_t leave = rows_;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < rows_; ++i) {
        const double e = at(i, enter);
        if (e <= kPivotEps) continue;
        const double ratio = rhs(i) / e;
        if (leave == rows_ || ratio < best - 1e-12) {
          best = ratio;
          leave = i;
        } else if (ratio <= best + 1e-12 && basis_[i] < basis_[leave]) {
          leave = i;
        }
      }
      if (leave == rows_) return false;
      pivot(leave, enter, obj);
    }
    throw std::runtime_error("simplex pivot limit reached");
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> a_;
  std::vector<std::size_t> basis_;
};

struct Row {
  std::vector<std::pair<std::size_t, double>> terms;
  Sense sense;
  double rhs;
};

}  // namespace

std::size_t LinearProgram::add_variable(double c, double lo, double hi) {
  cost.push_back(c);
  lower.push_back(lo);
  upper.push_back(hi);
  return cost.size() - 1;
}

LpResult solve_lp(const LinearProgram& lp) {
  const std::size_t n = lp.variable_count();
  if (lp.lower.size() != n || lp.upper.size() != n) throw std::invalid_argument("bound vectors do not match cost");
  LpResult result;
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(lp.lower[j])) throw std::invalid_argument("lower bounds must be finite");
    if (lp.upper[j] < lp.lower[j]) return result;
  }

  // Shift to x' = x - lower >= 0 and make every right-hand side non-negative.
  std::vector<Row> rows;
  for (const auto& c : lp.constraints) {
    Row r{c.terms, c.sense, c.rhs};
    for (const auto& [j, a] : c.terms) {
      if (j >= n) throw std::invalid_argument("constraint refers to an unknown variable");
      r.rhs -= a * lp.lower[j];
    }
    rows.push_back(std::move(r));
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (std::isfinite(lp.upper[j])) rows.push_back({{{j, 1.0}}, Sense::kLessEqual, lp.upper[j] - lp.lower[j]});
  }
  for (auto& r : rows) {
    if (r.rhs < 0.0) {
      r.rhs = -r.rhs;
      for (auto& t : r.terms) t.second = -t.second;
      if (r.sense != Sense::kEqual) r.sense = r.sense == Sense::kLessEqual ? Sense::kGreaterEqual : Sense::kLessEqual;
    }
  }

  std::size_t slacks = 0;
  std::size_t artificials = 0;
  for (const auto& r : rows) {
    if (r.sense != Sense::kEqual) ++slacks;
    if (r.sense != Sense::kLessEqual) ++artificials;
  }
  const std::size_t art_start = n + slacks;
  const std::size_t cols = art_start + artificials;
  Tableau t(rows.size(), cols);
  std::size_t next_slack = n;
  std::size_t next_art = art_start;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& [j, a] : rows[i].terms) t.at(i, j) += a;
    t.rhs(i) = rows[i].rhs;
    switch (rows[i].sense) {
      case Sense::kLessEqual:
        t.at(i, next_slack) = 1.0;
        t.basis(i) = next_slack++;
        break;
      case Sense::kGreaterEqual:
        t.at(i, next_slack++) = -1.0;
        t.at(i, next_art) = 1.0;
        t.basis(i) = next_art++;
        break;
      case Sense::kEqual:
        t.at(i, next_art) = 1.0;
        t.basis(i) = next_art++;
        break;
    }
  }

  std::vector<double> obj(cols + 1, 0.0);
  if (artificials > 0) {
    for (std::size_t j = art_start; j < cols; ++j) obj[j] = 1.0;
    for (std::size_t i = 0; i < t.rows(); ++i) {
      if (t.basis(i) < art_start) continue;
      for (std::size_t j = 0; j <= cols; ++j) obj[j] -= t.at(i, j);
    }
    t.optimize(obj, cols);
    if (-obj[cols] > kFeasibilityEps) return result;
    // Pivot leftover (zero-valued) artificials out of the basis where possible.
    std::vector<double> scratch(cols + 1, 0.0);
    for (std::size_t i = 0; i < t.rows(); ++i) {
      if (t.basis(i) < art_start) continue;
      for (std::size_t j = 0; j < art_start; ++j) {
        if (std::abs(t.at(i, j)) > kPivotEps) {
          t.pivot(i, j, scratch);
          break;
        }
      }
    }
  }

  std::fill(obj.begin(), obj.end(), 0.0);
  for (std::size_t j = 0; j < n; ++j) obj[j] = lp.cost[j];
  for (std::size_t i = 0; i < t.rows(); ++i) {
    const std::size_t b = t.basis(i);
    const double cb = b < n ? lp.cost[b] : 0.0;
    if (cb == 0.0) continue;
    for (std::size_t j = 0; j <= cols; ++j) obj[j] -= cb * t.at(i, j);
  }
  if (!t.optimize(obj, art_start)) {
    result.status = LpStatus::kUnbounded;
    return result;
  }

  result.status = LpStatus::kOptimal;
  result.x = lp.lower;
  for (std::size_t i = 0; i < t.rows(); ++i) {
    if (t.basis(i) < n) result.x[t.basis(i)] += std::max(0.0, t.rhs(i));
  }
  for (std::size_t j = 0; j < n; ++j) result.objective += lp.cost[j] * result.x[j];
  return result;
}

namespace {

struct Node {
  double bound;
  std::size_t id;
  std::vector<double> lower;
  std::vector<double> upper;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

double violation(const LinearConstraint& c, std::span<const double> x) {
  double lhs = 0.0;
  for (const auto& [j, a] : c.terms) lhs += a * x[j];
  switch (c.sense) {
    case Sense::kLessEqual:
      return lhs - c.rhs;
    case Sense::kGreaterEqual:
      return c.rhs - lhs;
    case Sense::kEqual:
      return std::abs(lhs - c.rhs);
  }
  return 0.0;
}

}  // namespace

MilpResult solve_milp(const LinearProgram& lp, const std::vector<bool>& integer, const CutSeparator& separate,
                      const MilpOptions& options) {
  const std::size_t n = lp.variable_count();
  if (integer.size() != n) throw std::invalid_argument("integrality flags do not match variables");

  MilpResult best;
  double incumbent = std::numeric_limits<double>::infinity();
  LinearProgram work = lp;

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  std::size_t next_id = 0;
  open.push({-std::numeric_limits<double>::infinity(), next_id++, lp.lower, lp.upper});

  auto prune_bound = [&](double bound) { return bound >= incumbent - 1e-9 * std::max(1.0, std::abs(incumbent)); };

  while (!open.empty()) {
    Node node = open.top();
    open.pop();
    if (prune_bound(node.bound)) continue;
    if (++best.nodes > options.max_nodes) throw std::runtime_error("branch-and-bound node limit reached");
    work.lower = node.lower;
    work.upper = node.upper;

    for (std::size_t round = 0;; ++round) {
      const LpResult r = solve_lp(work);
      if (r.status == LpStatus::kUnbounded) throw std::runtime_error("unbounded relaxation");
      if (r.status != LpStatus::kOptimal || prune_bound(r.objective)) break;

      std::size_t branch_var = n;
      double branch_frac = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (!integer[j]) continue;
        const double f = r.x[j] - std::floor(r.x[j]);
        const double dist = std::min(f, 1.0 - f);
        if (dist > options.integrality_tolerance && dist > branch_frac + 1e-12) {
          branch_frac = dist;
          branch_var = j;
        }
      }
      const bool integral = branch_var == n;
      std::vector<double> x = r.x;
      if (integral) {
        for (std::size_t j = 0; j < n; ++j) {
          if (integer[j]) x[j] = std::round(x[j]);
        }
      }

      if (separate && round < options.max_cut_rounds) {
        std::vector<LinearConstraint> cuts = separate(x, integral);
        std::erase_if(cuts, [&](const LinearConstraint& c) { return violation(c, x) <= 1e-6; });
        if (!cuts.empty()) {
          best.cuts += cuts.size();
          for (auto& c : cuts) work.constraints.push_back(std::move(c));
          continue;
        }
      } else if (separate && integral) {
        throw std::runtime_error("cut separation did not converge");
      }

      if (integral) {
        double obj = 0.0;
        for (std::size_t j = 0; j < n; ++j) obj += lp.cost[j] * x[j];
        if (obj < incumbent) {
          incumbent = obj;
          best.feasible = true;
          best.objective = obj;
          best.x = std::move(x);
        }
        break;
      }

      Node down{r.objective, next_id++, work.lower, work.upper};
      down.upper[branch_var] = std::floor(r.x[branch_var]);
      Node up{r.objective, next_id++, work.lower, work.upper};
      up.lower[branch_var] = std::ceil(r.x[branch_var]);
      open.push(std::move(down));
      open.push(std::move(up));
      break;
    }
  }
  return best;
}

}  // namespace ergoplan::route
