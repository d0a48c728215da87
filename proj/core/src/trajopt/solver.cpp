#include "ergoplan/trajopt/solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <random>
#include <stdexcept>

#include "ergoplan/error.hpp"
#include "ergoplan/mission/compiler.hpp"
#include "ergoplan/mission/payload.hpp"
#include "ergoplan/stl/robustness.hpp"
#include "ergoplan/trajopt/objective.hpp"

namespace ergoplan::trajopt {

using dynamics::kAxes;

void SolverConfig::validate() const {
  if (max_outer_iterations < 1 || max_inner_iterations < 1) throw std::invalid_argument("iteration budgets must be positive");
  if (!(initial_penalty > 0.0)) throw std::invalid_argument("initial penalty must be positive");
  if (!(penalty_growth > 1.0)) throw std::invalid_argument("penalty growth must exceed 1");
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (!(max_step > 0.0)) throw std::invalid_argument("max step must be positive");
  if (lbfgs_memory < 1 || max_backtracks < 1) throw std::invalid_argument("line search parameters must be positive");
  if (!(armijo > 0.0 && armijo < 1.0) || !(backtrack > 0.0 && backtrack < 1.0)) {
    throw std::invalid_argument("line search factors must lie in (0, 1)");
  }
}

Residuals residuals(const dynamics::Trajectory& traj, const dynamics::MotionLimits& limits) {
  const dynamics::LimitExcess ex = dynamics::limit_excess(traj, limits);
  Residuals r{ex.velocity, ex.acceleration, 0.0};
  if (traj.slack) {
    for (int j = 0; j < kAxes; ++j) {
      for (std::size_t k = 0; k < traj.accelerations[j].size(); ++k) {
        const double a = traj.accelerations[j][k];
        const double e = (*traj.slack)[j][k];
        r.slack = std::max({r.slack, a * a - e, -e});
      }
    }
  }
  return r;
}

namespace {

// Bound residual below which an iterate counts as dynamically feasible, and
// the robustness an iterate needs to be preferred as satisfying. Both leave
// room for the 6-decimal CSV output.
constexpr double kBoundSlack = 1e-7;
constexpr double kRobustnessMargin = 1e-3;
// Slack kept above a^2 in the returned trajectory for the same reason.
constexpr double kSlackHeadroom = 2e-6;

struct Candidate {
  std::vector<double> x;
  bool satisfied = false;
  double exact = 0.0;
  double score = 0.0;

  [[nodiscard]] bool better_than(const Candidate& o) const {
    if (satisfied != o.satisfied) return satisfied;
    if (!satisfied && exact != o.exact) return exact > o.exact;
    return score > o.score;
  }
};

class Solver {
 public:
  Solver(const mission::Scenario& scenario, const stl::Formula& formula, const SolverConfig& config)
      : obj_(scenario, formula), cfg_(config), n_(obj_.steps()) {}

  void project(std::vector<double>& x) const {
    const auto& lim = obj_.scenario().limits;
    for (int j = 0; j < kAxes; ++j) {
      for (std::size_t i = 0; i < n_; ++i) {
        double& a = x[j * n_ + i];
        a = std::clamp(a, -lim.a_max[j], lim.a_max[j]);
        double& e = x[(kAxes + j) * n_ + i];
        e = std::max(e, 0.0);
      }
    }
  }

  /// Gradient with the components that push against an active bound zeroed.
  std::vector<double> free_gradient(const std::vector<double>& x, const std::vector<double>& g) const {
    const auto& lim = obj_.scenario().limits;
    std::vector<double> out = g;
    for (int j = 0; j < kAxes; ++j) {
      for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t ia = j * n_ + i;
        if ((x[ia] >= lim.a_max[j] && g[ia] > 0.0) || (x[ia] <= -lim.a_max[j] && g[ia] < 0.0)) out[ia] = 0.0;
        const std::size_t ie = (kAxes + j) * n_ + i;
        if (x[ie] <= 0.0 && g[ie] < 0.0) out[ie] = 0.0;
      }
    }
    return out;
  }

  Candidate assess(const std::vector<double>& x, double smooth) const {
    const dynamics::Trajectory traj = obj_.trajectory(x);
    const auto payload = mission::derive_payload(traj, obj_.scenario());
    const auto signal = mission::make_signal(traj, payload);
    Candidate c;
    c.x = x;
    c.exact = stl::eval_robust(obj_.formula(), signal, 0);
    const dynamics::LimitExcess ex = dynamics::limit_excess(traj, obj_.scenario().limits);
    c.satisfied = c.exact > kRobustnessMargin && ex.velocity <= kBoundSlack && ex.acceleration <= kBoundSlack;
    double energy_term = 0.0;
    for (int j = 0; j < kAxes; ++j) {
      for (std::size_t i = 0; i < n_; ++i) {
        const double a = x[j * n_ + i];
        const double e = std::max(x[(kAxes + j) * n_ + i], a * a);
        energy_term += e * e;
      }
    }
    c.score = smooth - obj_.scenario().energy_weight * energy_term;
    return c;
  }

  PlanResult run(const dynamics::Trajectory& warm) {
    PlanResult result;
    result.warm_start_energy = dynamics::energy(warm).total;
    std::vector<double> x = DecisionVector::from_trajectory(warm).flatten();
    project(x);

    double mu = cfg_.initial_penalty;
    ObjectiveValue f = obj_.evaluate(x, mu);
    Candidate best = assess(x, f.smooth_robustness);

    for (int round = 1; round <= cfg_.max_outer_iterations; ++round) {
      f = obj_.evaluate(x, mu);
      std::vector<double> merits{f.value};
      std::deque<std::pair<std::vector<double>, std::vector<double>>> memory;  // (s, y) for -J

      for (int it = 0; it < cfg_.max_inner_iterations; ++it) {
        bool accepted = false;
        for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
          if (attempt == 1) {
            if (memory.empty()) break;
            memory.clear();
          }
          std::vector<double> d = direction(free_gradient(x, f.gradient), memory);
          double dmax = 0.0;
          for (double v : d) dmax = std::max(dmax, std::abs(v));
          if (dmax > cfg_.max_step) {
            for (double& v : d) v *= cfg_.max_step / dmax;
          }
          double alpha = 1.0;
          for (int bt = 0; bt < cfg_.max_backtracks; ++bt, alpha *= cfg_.backtrack) {
            std::vector<double> xn(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) xn[i] = x[i] + alpha * d[i];
            project(xn);
            double predicted = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) predicted += f.gradient[i] * (xn[i] - x[i]);
            if (predicted <= 0.0) continue;
            ObjectiveValue fn = obj_.evaluate(xn, mu);
            if (fn.value < f.value + cfg_.armijo * predicted) continue;

            std::vector<double> s(x.size());
            std::vector<double> y(x.size());
            double sy = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
              s[i] = xn[i] - x[i];
              y[i] = f.gradient[i] - fn.gradient[i];
              sy += s[i] * y[i];
            }
            if (sy > 1e-12) {
              memory.emplace_back(std::move(s), std::move(y));
              if (memory.size() > static_cast<std::size_t>(cfg_.lbfgs_memory)) memory.pop_front();
            }
            const double gain = fn.value - f.value;
            x = std::move(xn);
            f = std::move(fn);
            merits.push_back(f.value);
            ++result.iterations;
            Candidate c = assess(x, f.smooth_robustness);
            if (c.better_than(best)) best = std::move(c);
            accepted = true;
            if (gain <= cfg_.tolerance * std::max(1.0, std::abs(f.value))) it = cfg_.max_inner_iterations;
            break;
          }
        }
        if (!accepted) break;
      }
      result.merit_history.push_back(std::move(merits));

      const dynamics::Trajectory traj = obj_.trajectory(x);
      const Candidate c = assess(x, f.smooth_robustness);
      const Residuals r = residuals(traj, obj_.scenario().limits);
      result.log.push_back({round, mu, f.value, c.exact, f.smooth_robustness, dynamics::energy(traj).total,
                            std::max({r.velocity, r.acceleration, r.slack})});
      mu *= cfg_.penalty_growth;
    }

    std::vector<double> xb = best.x;
    for (int j = 0; j < kAxes; ++j) {
      for (std::size_t i = 0; i < n_; ++i) {
        const double a = xb[j * n_ + i];
        double& e = xb[(kAxes + j) * n_ + i];
        e = std::max(e, a * a) + kSlackHeadroom;
      }
    }
    if (cfg_.finite_difference_check) {
      std::mt19937_64 rng(cfg_.seed);
      std::uniform_int_distribution<std::size_t> pick(0, obj_.dimension() - 1);
      std::vector<std::size_t> coords(20);
      for (auto& c : coords) c = pick(rng);
      result.gradient_check_error = gradient_check(obj_, xb, mu, coords);
    }
    result.trajectory = obj_.trajectory(xb);
    result.trajectory.heading = dynamics::heading_profile(result.trajectory);
    const ObjectiveValue fb = obj_.evaluate(xb, mu, false);
    result.smooth_robustness = fb.smooth_robustness;
    result.exact_robustness = best.exact;
    result.energy = dynamics::energy(result.trajectory).total;
    result.residuals = residuals(result.trajectory, obj_.scenario().limits);
    result.satisfied = best.exact > 0.0 && result.residuals.velocity <= 1e-6 &&
                       result.residuals.acceleration <= 1e-6 && result.residuals.slack <= 1e-6;
    return result;
  }

 private:
  /// Two-loop L-BFGS ascent direction for J (memory holds pairs for -J).
  std::vector<double> direction(const std::vector<double>& g, const std::deque<std::pair<std::vector<double>, std::vector<double>>>& memory) const {
    std::vector<double> d = g;
    if (memory.empty()) {
      double gmax = 0.0;
      for (double v : g) gmax = std::max(gmax, std::abs(v));
      const double scale = gmax > 0.0 ? std::min(1.0, cfg_.max_step / gmax) : 1.0;
      for (double& v : d) v *= scale;
      return d;
    }
    std::vector<double> alphas(memory.size());
    for (std::size_t m = memory.size(); m-- > 0;) {
      const auto& [s, y] = memory[m];
      const double rho = 1.0 / std::inner_product(y.begin(), y.end(), s.begin(), 0.0);
      alphas[m] = rho * std::inner_product(s.begin(), s.end(), d.begin(), 0.0);
      for (std::size_t i = 0; i < d.size(); ++i) d[i] -= alphas[m] * y[i];
    }
    const auto& [s_last, y_last] = memory.back();
    const double gamma = std::inner_product(s_last.begin(), s_last.end(), y_last.begin(), 0.0) /
                         std::inner_product(y_last.begin(), y_last.end(), y_last.begin(), 0.0);
    for (double& v : d) v *= gamma;
    for (std::size_t m = 0; m < memory.size(); ++m) {
      const auto& [s, y] = memory[m];
      const double rho = 1.0 / std::inner_product(y.begin(), y.end(), s.begin(), 0.0);
      const double beta = rho * std::inner_product(y.begin(), y.end(), d.begin(), 0.0);
      for (std::size_t i = 0; i < d.size(); ++i) d[i] += (alphas[m] - beta) * s[i];
    }
    return d;
  }

  Objective obj_;
  SolverConfig cfg_;
  std::size_t n_;
};

}  // namespace

PlanResult solve(const mission::Scenario& scenario, const stl::Formula& formula, const dynamics::Trajectory& warm,
                 const SolverConfig& config) {
  config.validate();
  if (!(warm.grid == scenario.grid)) throw LengthMismatch("warm start is not on the scenario grid");
  Solver solver(scenario, formula, config);
  return solver.run(warm);
}

}  // namespace ergoplan::trajopt
