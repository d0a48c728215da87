#include "ergoplan/trajopt/objective.hpp"

#include <algorithm>
#include <cmath>

#include "ergoplan/error.hpp"
#include "ergoplan/mission/compiler.hpp"
#include "ergoplan/mission/payload.hpp"
#include "ergoplan/stl/robustness.hpp"

namespace ergoplan::trajopt {

using dynamics::kAxes;

std::vector<double> DecisionVector::flatten() const {
  std::vector<double> x;
  for (const auto& a : accelerations) x.insert(x.end(), a.begin(), a.end());
  for (const auto& e : slack) x.insert(x.end(), e.begin(), e.end());
  return x;
}

DecisionVector DecisionVector::unflatten(std::span<const double> x, std::size_t steps) {
  if (x.size() != 6 * steps) {
    throw LengthMismatch("decision vector has " + std::to_string(x.size()) + " entries, expected " +
                         std::to_string(6 * steps));
  }
  DecisionVector d;
  for (int j = 0; j < kAxes; ++j) {
    const auto a = x.subspan(j * steps, steps);
    const auto e = x.subspan((kAxes + j) * steps, steps);
    d.accelerations[j].assign(a.begin(), a.end());
    d.slack[j].assign(e.begin(), e.end());
  }
  return d;
}

DecisionVector DecisionVector::from_trajectory(const dynamics::Trajectory& traj) {
  DecisionVector d;
  d.accelerations = traj.accelerations;
  for (int j = 0; j < kAxes; ++j) {
    d.slack[j].resize(traj.accelerations[j].size());
    for (std::size_t k = 0; k < d.slack[j].size(); ++k) d.slack[j][k] = traj.accelerations[j][k] * traj.accelerations[j][k];
  }
  return d;
}

Objective::Objective(const mission::Scenario& scenario, stl::Formula formula)
    : scenario_(scenario), formula_(std::move(formula)) {}

dynamics::Trajectory Objective::trajectory(std::span<const double> x) const {
  const std::size_t n = steps();
  if (x.size() != dimension()) {
    throw LengthMismatch("decision vector has " + std::to_string(x.size()) + " entries, expected " +
                         std::to_string(dimension()));
  }
  dynamics::AxisSeries accel;
  std::array<dynamics::AxisState, kAxes> init{};
  for (int j = 0; j < kAxes; ++j) {
    accel[j].assign(x.begin() + j * n, x.begin() + (j + 1) * n);
    init[j] = {scenario_.depot[j], 0.0};
  }
  dynamics::Trajectory traj = dynamics::rollout(init, accel, scenario_.grid);
  dynamics::AxisSeries slack;
  for (int j = 0; j < kAxes; ++j) slack[j].assign(x.begin() + (kAxes + j) * n, x.begin() + (kAxes + j + 1) * n);
  traj.slack = std::move(slack);
  return traj;
}

ObjectiveValue Objective::evaluate(std::span<const double> x, double penalty_weight, bool with_gradient) const {
  for (double xi : x) {
    if (!std::isfinite(xi)) throw NonFiniteValue("decision vector contains a non-finite entry");
  }
  const dynamics::Trajectory traj = trajectory(x);
  const std::size_t n = steps();
  const std::size_t samples = n + 1;
  const double dt = scenario_.grid.sampling_period();
  const double q = scenario_.energy_weight;
  const double mu = penalty_weight;
  const auto& lim = scenario_.limits;

  const mission::PayloadSignal payload = mission::derive_payload(traj, scenario_);
  const stl::Signal signal = mission::make_signal(traj, payload);

  ObjectiveValue out;
  // dJ/dp and dJ/dv per axis and sample
  std::array<std::vector<double>, kAxes> gp;
  std::array<std::vector<double>, kAxes> gv;
  if (with_gradient) {
    const stl::SmoothRobustness s = stl::eval_agm_with_gradient(formula_, signal, 0);
    out.smooth_robustness = s.value;
    for (int j = 0; j < kAxes; ++j) {
      const std::size_t pc = signal.index_of(mission::kPositionChannels[j]);
      const std::size_t vc = signal.index_of(mission::kVelocityChannels[j]);
      gp[j].assign(s.gradient.begin() + pc * samples, s.gradient.begin() + (pc + 1) * samples);
      gv[j].assign(s.gradient.begin() + vc * samples, s.gradient.begin() + (vc + 1) * samples);
    }
    out.gradient.assign(dimension(), 0.0);
  } else {
    out.smooth_robustness = stl::eval_agm(formula_, signal, 0);
  }

  for (int j = 0; j < kAxes; ++j) {
    for (std::size_t k = 0; k < samples; ++k) {
      const double v = traj.velocities[j][k];
      const double e = std::abs(v) - lim.v_max[j];
      if (e > 0.0) {
        out.penalty += e * e;
        if (with_gradient) gv[j][k] -= mu * 2.0 * e * (v > 0.0 ? 1.0 : -1.0);
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double a = x[j * n + i];
      const double eps = x[(kAxes + j) * n + i];
      double ga = 0.0;
      double ge = 0.0;
      const double ea = std::abs(a) - lim.a_max[j];
      if (ea > 0.0) {
        out.penalty += ea * ea;
        ga -= mu * 2.0 * ea * (a > 0.0 ? 1.0 : -1.0);
      }
      const double es = a * a - eps;
      if (es > 0.0) {
        out.penalty += es * es;
        ga -= mu * 4.0 * es * a;
        ge += mu * 2.0 * es;
      }
      if (eps < 0.0) {
        out.penalty += eps * eps;
        ge -= mu * 2.0 * eps;
      }
      out.energy_term += q * eps * eps;
      ge -= 2.0 * q * eps;
      if (with_gradient) {
        out.gradient[j * n + i] += ga;
        out.gradient[(kAxes + j) * n + i] += ge;
      }
    }
    if (with_gradient) {
      // dp_k/da_i = dt^2 (k - i - 1/2), dv_k/da_i = dt, for i < k
      double s1 = 0.0;
      double s2 = 0.0;
      double sv = 0.0;
      for (std::size_t i = n; i-- > 0;) {
        const double k = static_cast<double>(i + 1);
        s1 += gp[j][i + 1];
        s2 += k * gp[j][i + 1];
        sv += gv[j][i + 1];
        out.gradient[j * n + i] += dt * dt * (s2 - (static_cast<double>(i) + 0.5) * s1) + dt * sv;
      }
    }
  }

  out.value = out.smooth_robustness - out.energy_term - mu * out.penalty;
  if (!std::isfinite(out.value)) throw NonFiniteValue("objective is not finite");
  for (double g : out.gradient) {
    if (!std::isfinite(g)) throw NonFiniteValue("objective gradient is not finite");
  }
  return out;
}

ObjectiveValue objective(const DecisionVector& dec, const mission::Scenario& scenario, const stl::Formula& formula,
                         double penalty_weight) {
  const Objective obj(scenario, formula);
  return obj.evaluate(dec.flatten(), penalty_weight);
}

double gradient_check(const Objective& objective, std::span<const double> x, double penalty_weight,
                      std::span<const std::size_t> coordinates, double h) {
  const ObjectiveValue base = objective.evaluate(x, penalty_weight, true);
  std::vector<double> probe(x.begin(), x.end());
  double worst = 0.0;
  for (std::size_t c : coordinates) {
    probe[c] = x[c] + h;
    const double up = objective.evaluate(probe, penalty_weight, false).value;
    probe[c] = x[c] - h;
    const double down = objective.evaluate(probe, penalty_weight, false).value;
    probe[c] = x[c];
    const double fd = (up - down) / (2.0 * h);
    const double g = base.gradient[c];
    worst = std::max(worst, std::abs(g - fd) / std::max({std::abs(g), std::abs(fd), 1e-3}));
  }
  return worst;
}

}  // namespace ergoplan::trajopt
