#include "ergoplan/dynamics/motion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ergoplan/error.hpp"

namespace ergoplan::dynamics {

MotionLimits MotionLimits::uniform(double v_max, double a_max) {
  if (!(v_max > 0.0) || !(a_max > 0.0)) throw std::invalid_argument("motion limits must be positive");
  return MotionLimits{{v_max, v_max, v_max}, {a_max, a_max, a_max}};
}

AxisState step(const AxisState& state, double accel, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step needs dt > 0, got " + std::to_string(dt));
  return AxisState{state.position + state.velocity * dt + 0.5 * accel * dt * dt, state.velocity + accel * dt};
}

Trajectory rollout(const std::array<AxisState, kAxes>& initial, const AxisSeries& accels, const TimeGrid& grid) {
  const std::size_t n = grid.sample_count();
  Trajectory traj{grid, {}, {}, accels, std::nullopt, std::nullopt};
  for (int j = 0; j < kAxes; ++j) {
    if (accels[j].size() != n - 1) {
      throw LengthMismatch("axis " + std::to_string(j + 1) + " has " + std::to_string(accels[j].size()) +
                           " accelerations, expected " + std::to_string(n - 1));
    }
    auto& p = traj.positions[j];
    auto& v = traj.velocities[j];
    p.resize(n);
    v.resize(n);
    AxisState s = initial[j];
    p[0] = s.position;
    v[0] = s.velocity;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      s = step(s, accels[j][k], grid.sampling_period());
      p[k + 1] = s.position;
      v[k + 1] = s.velocity;
    }
  }
  return traj;
}

double rollout_defect(const Trajectory& traj) {
  std::array<AxisState, kAxes> init{};
  for (int j = 0; j < kAxes; ++j) init[j] = {traj.positions[j][0], traj.velocities[j][0]};
  const Trajectory fresh = rollout(init, traj.accelerations, traj.grid);
  double worst = 0.0;
  for (int j = 0; j < kAxes; ++j) {
    for (std::size_t k = 0; k < traj.grid.sample_count(); ++k) {
      worst = std::max(worst, std::abs(fresh.positions[j][k] - traj.positions[j][k]));
      worst = std::max(worst, std::abs(fresh.velocities[j][k] - traj.velocities[j][k]));
    }
  }
  return worst;
}

double min_rest_to_rest_time(double distance, double v_max, double a_max) {
  const double d = std::abs(distance);
  if (d == 0.0) return 0.0;
  if (d <= v_max * v_max / a_max) return 2.0 * std::sqrt(d / a_max);  // triangular
  return d / v_max + v_max / a_max;                                  // trapezoidal
}

namespace {

// A symmetric profile with n1 accelerating steps out of M covers
// A * dt^2 * n1 * (M - n1) and peaks at A * n1 * dt.
struct Phase {
  std::size_t steps = 0;
  std::size_t ramp = 0;
};

bool fits(double d, std::size_t m, std::size_t n1, double dt, double v_max, double a_max) {
  if (n1 == 0 || 2 * n1 > m) return false;
  const double span = static_cast<double>(n1) * static_cast<double>(m - n1);
  const double a = d / (dt * dt * span);
  const double tol = 1e-12 * std::max(1.0, a_max);
  return a <= a_max + tol && a * static_cast<double>(n1) * dt <= v_max + 1e-12 * std::max(1.0, v_max);
}

/// Largest feasible ramp for M steps (lowest acceleration), or 0 when none.
std::size_t best_ramp(double d, std::size_t m, double dt, double v_max, double a_max) {
  for (std::size_t n1 = m / 2; n1 >= 1; --n1) {
    if (fits(d, m, n1, dt, v_max, a_max)) return n1;
  }
  return 0;
}

std::size_t min_steps(double d, double dt, double v_max, double a_max) {
  if (d == 0.0) return 0;
  const double t = min_rest_to_rest_time(d, v_max, a_max);
  std::size_t m = static_cast<std::size_t>(std::max(2.0, std::floor(t / dt) - 1.0));
  while (best_ramp(d, m, dt, v_max, a_max) == 0) ++m;
  return m;
}

}  // namespace

MotionSegment rest_to_rest(const Vec3& from, const Vec3& to, const MotionLimits& limits, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("rest_to_rest needs dt > 0");
  for (int j = 0; j < kAxes; ++j) {
    if (!(limits.v_max[j] > 0.0) || !(limits.a_max[j] > 0.0)) {
      throw std::invalid_argument("motion limits must be positive");
    }
  }
  const Vec3 delta = to - from;
  std::size_t m = 0;
  int dominant = -1;
  for (int j = 0; j < kAxes; ++j) {
    const std::size_t mj = min_steps(std::abs(delta[j]), dt, limits.v_max[j], limits.a_max[j]);
    if (mj > m) {
      m = mj;
      dominant = j;
    }
  }

  MotionSegment seg;
  seg.dt = dt;
  for (int j = 0; j < kAxes; ++j) {
    seg.accelerations[j].assign(m, 0.0);
    seg.positions[j].assign(m + 1, from[j]);
    seg.velocities[j].assign(m + 1, 0.0);
  }
  if (m == 0) return seg;

  // Slower axes reuse the dominant axis's ramp so that all axes stay
  // proportional (straight-line path); the acceleration scales with distance.
  const std::size_t shared_ramp =
      best_ramp(std::abs(delta[dominant]), m, dt, limits.v_max[dominant], limits.a_max[dominant]);
  for (int j = 0; j < kAxes; ++j) {
    const double d = std::abs(delta[j]);
    if (d == 0.0) continue;
    std::size_t n1 = shared_ramp;
    if (!fits(d, m, n1, dt, limits.v_max[j], limits.a_max[j])) n1 = best_ramp(d, m, dt, limits.v_max[j], limits.a_max[j]);
    const double a = std::copysign(d / (dt * dt * static_cast<double>(n1) * static_cast<double>(m - n1)), delta[j]);
    auto& acc = seg.accelerations[j];
    for (std::size_t k = 0; k < n1; ++k) {
      acc[k] = a;
      acc[m - 1 - k] = -a;
    }
    AxisState s{from[j], 0.0};
    for (std::size_t k = 0; k < m; ++k) {
      s = step(s, acc[k], dt);
      seg.positions[j][k + 1] = s.position;
      seg.velocities[j][k + 1] = s.velocity;
    }
  }
  return seg;
}

std::vector<double> heading_profile(const Trajectory& traj, double speed_floor) {
  const std::size_t n = traj.grid.sample_count();
  std::vector<double> psi(n, 0.0);
  double held = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double vx = traj.velocities[0][k];
    const double vy = traj.velocities[1][k];
    if (std::hypot(vx, vy) >= speed_floor) held = std::atan2(vy, vx);
    psi[k] = held;
  }
  return psi;
}

EnergyProfile energy(const Trajectory& traj) {
  EnergyProfile e;
  const std::size_t steps = traj.grid.steps();
  e.per_sample.assign(steps, 0.0);
  for (std::size_t k = 0; k < steps; ++k) {
    double s = 0.0;
    for (int j = 0; j < kAxes; ++j) s += traj.accelerations[j][k] * traj.accelerations[j][k];
    e.per_sample[k] = s * traj.grid.sampling_period();
    e.total += e.per_sample[k];
  }
  return e;
}

LimitExcess limit_excess(const Trajectory& traj, const MotionLimits& limits) {
  LimitExcess ex;
  for (int j = 0; j < kAxes; ++j) {
    for (double v : traj.velocities[j]) ex.velocity = std::max(ex.velocity, std::abs(v) - limits.v_max[j]);
    for (double a : traj.accelerations[j]) ex.acceleration = std::max(ex.acceleration, std::abs(a) - limits.a_max[j]);
  }
  return ex;
}

}  // namespace ergoplan::dynamics
