#pragma once

#include <vector>

#include "ergoplan/dynamics/motion.hpp"
#include "ergoplan/mission/scenario.hpp"

namespace ergoplan::mission {

/// Number of tools carried at each sample.
struct PayloadSignal {
  std::vector<int> values;
};

/// Scans the trajectory for completed holds. The payload starts at capacity;
/// the first time the vehicle has stayed inside an operator's handover box
/// for T_han it drops by one (not below zero) from the next sample on, and
/// after staying inside a refill box for T_rs it is restored to capacity
/// from the next sample on.
PayloadSignal derive_payload(const dynamics::Trajectory& traj, const Scenario& scenario);

}  // namespace ergoplan::mission
