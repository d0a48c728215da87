#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ergoplan/dynamics/motion.hpp"

namespace ergoplan::dynamics {

/// Columns of the trajectory file, in order.
inline constexpr const char* kTrajectoryCsvHeader = "t,p1,p2,p3,v1,v2,v3,a1,a2,a3,eps1,eps2,eps3,psi,c";

/// Writes one row per sample with %.6f formatting. Acceleration and slack
/// cells are empty on the final row; slack, heading and payload cells are
/// empty when not supplied.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj,
                          const std::vector<int>* payload = nullptr);

struct TrajectoryFile {
  Trajectory trajectory;
  std::optional<std::vector<int>> payload;
};

/// Parses a trajectory file. Throws ParseError with a line number on
/// malformed content, including an empty file or non-uniform time column.
TrajectoryFile read_trajectory_csv(std::istream& in);

}  // namespace ergoplan::dynamics
