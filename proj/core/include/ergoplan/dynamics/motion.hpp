#pragma once

#include <array>
#include <optional>
#include <vector>

#include "ergoplan/geometry.hpp"
#include "ergoplan/stl/time_grid.hpp"

namespace ergoplan::dynamics {

using stl::TimeGrid;

inline constexpr int kAxes = 3;
using AxisSeries = std::array<std::vector<double>, kAxes>;

/// Per-axis velocity and acceleration bounds.
struct MotionLimits {
  Vec3 v_max{};
  Vec3 a_max{};

  /// Same bounds on every axis; throws std::invalid_argument unless positive.
  static MotionLimits uniform(double v_max, double a_max);
};

struct AxisState {
  double position = 0.0;
  double velocity = 0.0;
};

/// One step of the double integrator under constant acceleration.
/// Throws std::invalid_argument unless dt > 0.
AxisState step(const AxisState& state, double accel, double dt);

/// Sampled vehicle motion. positions/velocities hold sample_count entries,
/// accelerations (and slack, when present) hold sample_count - 1.
struct Trajectory {
  TimeGrid grid{1.0, 2};
  AxisSeries positions;
  AxisSeries velocities;
  AxisSeries accelerations;
  std::optional<AxisSeries> slack;
  std::optional<std::vector<double>> heading;

  [[nodiscard]] Vec3 position(std::size_t k) const {
    return {positions[0][k], positions[1][k], positions[2][k]};
  }
  [[nodiscard]] Vec3 velocity(std::size_t k) const {
    return {velocities[0][k], velocities[1][k], velocities[2][k]};
  }
};

/// Iterates `step` from the initial states. Throws LengthMismatch unless every
/// acceleration sequence has sample_count - 1 entries.
Trajectory rollout(const std::array<AxisState, kAxes>& initial, const AxisSeries& accels, const TimeGrid& grid);

/// Largest deviation between the stored states and a fresh rollout of the
/// stored accelerations.
double rollout_defect(const Trajectory& traj);

/// A motion primitive on a dt grid. Unlike Trajectory it may consist of a
/// single sample (zero duration).
struct MotionSegment {
  double dt = 0.0;
  AxisSeries positions;
  AxisSeries velocities;
  AxisSeries accelerations;

  [[nodiscard]] std::size_t steps() const { return accelerations[0].size(); }
  [[nodiscard]] double duration() const { return dt * static_cast<double>(steps()); }
};

/// Minimum continuous time for a rest-to-rest move of |distance| under the
/// given bounds (triangular or trapezoidal velocity profile).
double min_rest_to_rest_time(double distance, double v_max, double a_max);

/// Rest-to-rest move sampled with piecewise-constant accelerations on the dt
/// grid: accelerate for n1 steps, coast, decelerate for n1 steps. The number
/// of steps is the smallest for which every axis fits within its limits, and
/// all axes share the same phase structure so the path is a straight line.
MotionSegment rest_to_rest(const Vec3& from, const Vec3& to, const MotionLimits& limits, double dt);

/// Heading that follows the direction of planar motion; held while the
/// planar speed is below `speed_floor`.
std::vector<double> heading_profile(const Trajectory& traj, double speed_floor = 0.05);

struct EnergyProfile {
  double total = 0.0;
  std::vector<double> per_sample;  ///< sum_j a_k^(j)^2 * T_s per transition
};

/// Acceleration-squared energy proxy E = sum_k sum_j (a_k^(j))^2 * T_s.
EnergyProfile energy(const Trajectory& traj);

/// Largest excess of |v| over v_max and of |a| over a_max across the trajectory.
struct LimitExcess {
  double velocity = 0.0;
  double acceleration = 0.0;
};
LimitExcess limit_excess(const Trajectory& traj, const MotionLimits& limits);

}  // namespace ergoplan::dynamics
