#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ergoplan/dynamics/motion.hpp"
#include "ergoplan/geometry.hpp"
#include "ergoplan/stl/time_grid.hpp"

namespace ergoplan::mission {

/// Approach directions, relative to the operator's facing direction.
enum class Direction { kFront, kLeft, kRight, kAbove, kBelow };

/// How an operator's preference regions combine: any one of them, or all at once.
enum class PrefCombinator { kAny, kAll };

std::string_view to_string(Direction d);
Direction direction_from_string(std::string_view s);  ///< throws InvalidScenario
std::string_view to_string(PrefCombinator c);
PrefCombinator combinator_from_string(std::string_view s);  ///< throws InvalidScenario

struct PreferenceBox {
  Direction direction;
  Box3 box;
};

struct Operator {
  std::string id;
  Vec3 position{};
  double heading = 0.0;  ///< radians, facing direction in the horizontal plane
  Box3 handover_box;
  Box3 behind_box;
  std::vector<PreferenceBox> preferences;
  PrefCombinator combinator = PrefCombinator::kAny;
};

/// Default dimensions of the regions derived around an operator (meters).
struct OperatorGeometry {
  double reach = 1.0;          ///< operator position to handover box center
  double handover_size = 1.0;  ///< edge of the handover cube
  double behind_depth = 1.0;
  double behind_width = 1.0;
  double behind_height = 1.0;
};

struct RefillStation {
  std::string id;
  Box3 box;
  /// Region the vehicle must remain in once it returns home; defaults to `box`.
  Box3 home;
};

struct Scenario {
  Box3 workspace;
  std::vector<Box3> obstacles;
  std::vector<Operator> operators;
  std::vector<RefillStation> refill_stations;
  Vec3 depot{};
  int capacity = 1;
  double mission_time = 0.0;   ///< T_N
  double handover_time = 0.0;  ///< T_han
  double refill_time = 0.0;    ///< T_rs
  stl::TimeGrid grid{1.0, 2};
  dynamics::MotionLimits limits;
  double energy_weight = 0.1;  ///< q in Q = q * I

  /// Throws InvalidScenario (or HeadingNotAxisAligned) when an invariant fails.
  void validate() const;
};

/// Unit vector of a heading that is a multiple of pi/2 (within 1e-6 rad).
/// Throws HeadingNotAxisAligned otherwise.
Vec3 facing_direction(double heading);

/// Box directly behind an operator standing at `position` and facing
/// `heading`: `depth` deep along the reversed facing axis, `width` across,
/// `height` tall, centered on the operator's horizontal axis.
Box3 behind_region(const Vec3& position, double heading, double depth, double width, double height);

/// Builds an operator with its handover, behind and preference boxes derived
/// from position and heading. Each preference box is the handover box shifted
/// by half its size toward the preferred side, so the two overlap.
Operator make_operator(std::string id, const Vec3& position, double heading, const std::vector<Direction>& preferences,
                       PrefCombinator combinator = PrefCombinator::kAny, const OperatorGeometry& geometry = {});

/// Translates every region and point of the scenario.
Scenario translated(const Scenario& s, const Vec3& offset);

}  // namespace ergoplan::mission
