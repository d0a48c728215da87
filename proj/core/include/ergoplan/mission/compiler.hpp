#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ergoplan/dynamics/motion.hpp"
#include "ergoplan/geometry.hpp"
#include "ergoplan/mission/payload.hpp"
#include "ergoplan/mission/scenario.hpp"
#include "ergoplan/stl/formula.hpp"
#include "ergoplan/stl/signal.hpp"

namespace ergoplan::mission {

/// Channel names used by compiled mission formulas.
inline constexpr const char* kPositionChannels[3] = {"p1", "p2", "p3"};
inline constexpr const char* kVelocityChannels[3] = {"v1", "v2", "v3"};
inline constexpr const char* kPayloadChannel = "c";

/// Strict membership of the position in a box, as a conjunction of six
/// predicates each normalized by the box half-width along its axis.
stl::Formula inside(const Box3& box);
/// Negation of `inside`.
stl::Formula outside(const Box3& box);

struct MissionFormula {
  stl::Formula formula;
  /// Named parts for per-clause reporting: ws, obs (when obstacles exist),
  /// beh, han, rs, hm. Each is evaluated at sample 0.
  std::vector<std::pair<std::string, stl::Formula>> clauses;
};

/// Compiles the mission into
///   always[0,T_N](ws & obs & beh)
///   & for each operator: eventually[0,T_N-T_han](pref & always[0,T_han] han)
///   & OR over stations: eventually[0,T_N-T_rs](!(c=0) | always[0,T_rs] station)
///   & OR over stations: always[T_s,T_N-T_s](!home | next[T_s,T_s] home)
/// Throws InvalidScenario if the scenario is invalid or has no refill station.
MissionFormula compile_mission(const Scenario& scenario);
stl::Formula compile_formula(const Scenario& scenario);

/// Signal with channels p1..p3, v1..v3 and c (+1 while carrying, -1 when empty).
stl::Signal make_signal(const dynamics::Trajectory& traj, const PayloadSignal& payload);

}  // namespace ergoplan::mission
