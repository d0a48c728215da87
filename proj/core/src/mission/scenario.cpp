#include "ergoplan/mission/scenario.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "ergoplan/error.hpp"

namespace ergoplan::mission {

std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::kFront: return "front";
    case Direction::kLeft: return "left";
    case Direction::kRight: return "right";
    case Direction::kAbove: return "above";
    case Direction::kBelow: return "below";
  }
  return "?";
}

Direction direction_from_string(std::string_view s) {
  for (Direction d : {Direction::kFront, Direction::kLeft, Direction::kRight, Direction::kAbove, Direction::kBelow}) {
    if (to_string(d) == s) return d;
  }
  throw InvalidScenario("unknown approach direction '" + std::string(s) +
                        "' (expected front, left, right, above or below)");
}

std::string_view to_string(PrefCombinator c) { return c == PrefCombinator::kAny ? "any" : "all"; }

PrefCombinator combinator_from_string(std::string_view s) {
  if (s == "any") return PrefCombinator::kAny;
  if (s == "all") return PrefCombinator::kAll;
  throw InvalidScenario("unknown preference combinator '" + std::string(s) + "' (expected any or all)");
}

Vec3 facing_direction(double heading) {
  const double quarter = std::numbers::pi / 2.0;
  const double turns = std::round(heading / quarter);
  if (!std::isfinite(heading) || std::abs(heading - turns * quarter) > 1e-6) {
    throw HeadingNotAxisAligned("heading " + std::to_string(heading) + " rad is not a multiple of pi/2");
  }
  const long q = ((static_cast<long>(turns) % 4) + 4) % 4;
  static constexpr Vec3 kDirs[4] = {{1, 0, 0}, {0, 1, 0}, {-1, 0, 0}, {0, -1, 0}};
  return kDirs[q];
}

Box3 behind_region(const Vec3& position, double heading, double depth, double width, double height) {
  if (!(depth > 0.0) || !(width > 0.0) || !(height > 0.0)) {
    throw InvalidScenario("behind region dimensions must be positive");
  }
  const Vec3 f = facing_direction(heading);
  const Vec3 center = position - (0.5 * depth) * f;
  const Vec3 size = f[0] != 0.0 ? Vec3{depth, width, height} : Vec3{width, depth, height};
  return Box3::centered(center, size);
}

namespace {

Vec3 direction_vector(Direction d, const Vec3& facing) {
  switch (d) {
    case Direction::kFront: return facing;
    case Direction::kLeft: return {-facing[1], facing[0], 0.0};
    case Direction::kRight: return {facing[1], -facing[0], 0.0};
    case Direction::kAbove: return {0.0, 0.0, 1.0};
    case Direction::kBelow: return {0.0, 0.0, -1.0};
  }
  return facing;
}

}  // namespace

Operator make_operator(std::string id, const Vec3& position, double heading, const std::vector<Direction>& preferences,
                       PrefCombinator combinator, const OperatorGeometry& geometry) {
  if (!(geometry.reach >= 0.0) || !(geometry.handover_size > 0.0)) {
    throw InvalidScenario("operator '" + id + "': reach must be >= 0 and handover size > 0");
  }
  const Vec3 f = facing_direction(heading);
  const double s = geometry.handover_size;
  Operator op;
  op.id = std::move(id);
  op.position = position;
  op.heading = heading;
  op.combinator = combinator;
  op.handover_box = Box3::centered(position + geometry.reach * f, {s, s, s});
  op.behind_box =
      behind_region(position, heading, geometry.behind_depth, geometry.behind_width, geometry.behind_height);
  for (Direction d : preferences) {
    op.preferences.push_back({d, op.handover_box.translated((0.5 * s) * direction_vector(d, f))});
  }
  return op;
}

namespace {

bool overlaps_or_abuts(const Box3& a, const Box3& b) {
  for (int j = 0; j < 3; ++j) {
    if (a.upper[j] < b.lower[j] || b.upper[j] < a.lower[j]) return false;
  }
  return true;
}

void check_box(const Box3& b, const std::string& what) {
  for (int j = 0; j < 3; ++j) {
    if (!std::isfinite(b.lower[j]) || !std::isfinite(b.upper[j]) || !(b.lower[j] < b.upper[j])) {
      throw InvalidScenario(what + ": lower must be below upper on every axis");
    }
  }
}

}  // namespace

void Scenario::validate() const {
  check_box(workspace, "workspace");
  if (capacity < 1) throw InvalidScenario("capacity must be a positive integer");
  if (!(mission_time > 0.0)) throw InvalidScenario("times.T_N must be positive");
  if (!(handover_time > 0.0) || !(handover_time < mission_time)) {
    throw InvalidScenario("times.T_han must be positive and below T_N");
  }
  if (!(refill_time > 0.0) || !(refill_time < mission_time)) {
    throw InvalidScenario("times.T_rs must be positive and below T_N");
  }
  if (std::abs(grid.horizon() - mission_time) > 1e-9 * std::max(1.0, mission_time)) {
    throw InvalidScenario("time grid horizon " + std::to_string(grid.horizon()) + " does not match T_N " +
                          std::to_string(mission_time));
  }
  for (int j = 0; j < 3; ++j) {
    if (!(limits.v_max[j] > 0.0) || !(limits.a_max[j] > 0.0)) {
      throw InvalidScenario("limits.v_max and limits.a_max must be positive");
    }
  }
  if (!(energy_weight >= 0.0) || !std::isfinite(energy_weight)) {
    throw InvalidScenario("energy_weight must be a non-negative number");
  }
  if (!workspace.contains(depot)) throw InvalidScenario("depot " + ergoplan::to_string(depot) + " is outside the workspace");

  for (std::size_t i = 0; i < obstacles.size(); ++i) check_box(obstacles[i], "obstacles[" + std::to_string(i) + "]");

  std::set<std::string> ids;
  for (std::size_t i = 0; i < operators.size(); ++i) {
    const Operator& op = operators[i];
    const std::string where = "operators[" + std::to_string(i) + "] ('" + op.id + "')";
    if (!ids.insert(op.id).second) throw InvalidScenario(where + ": duplicate id");
    facing_direction(op.heading);
    check_box(op.handover_box, where + ".handover_box");
    check_box(op.behind_box, where + ".behind_box");
    if (!workspace.contains(op.handover_box)) throw InvalidScenario(where + ": handover box leaves the workspace");
    if (op.preferences.empty()) throw InvalidScenario(where + ": needs at least one approach preference");
    for (const auto& pref : op.preferences) {
      const std::string pw = where + " preference '" + std::string(to_string(pref.direction)) + "'";
      check_box(pref.box, pw);
      if (!workspace.contains(pref.box)) throw InvalidScenario(pw + ": box leaves the workspace");
      if (pref.box.intersects(op.behind_box)) throw InvalidScenario(pw + ": box intersects the behind region");
      if (!overlaps_or_abuts(pref.box, op.handover_box)) {
        throw InvalidScenario(pw + ": box neither intersects nor abuts the handover box");
      }
    }
  }
  for (std::size_t i = 0; i < refill_stations.size(); ++i) {
    const RefillStation& rs = refill_stations[i];
    const std::string where = "refill_stations[" + std::to_string(i) + "] ('" + rs.id + "')";
    if (!ids.insert(rs.id).second) throw InvalidScenario(where + ": duplicate id");
    check_box(rs.box, where);
    check_box(rs.home, where + ".home");
    if (!workspace.contains(rs.box) || !workspace.contains(rs.home)) {
      throw InvalidScenario(where + ": box leaves the workspace");
    }
  }
}

Scenario translated(const Scenario& s, const Vec3& offset) {
  Scenario t = s;
  t.workspace = s.workspace.translated(offset);
  for (auto& b : t.obstacles) b = b.translated(offset);
  for (auto& op : t.operators) {
    op.position = op.position + offset;
    op.handover_box = op.handover_box.translated(offset);
    op.behind_box = op.behind_box.translated(offset);
    for (auto& p : op.preferences) p.box = p.box.translated(offset);
  }
  for (auto& rs : t.refill_stations) {
    rs.box = rs.box.translated(offset);
    rs.home = rs.home.translated(offset);
  }
  t.depot = s.depot + offset;
  return t;
}

}  // namespace ergoplan::mission
