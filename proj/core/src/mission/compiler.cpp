#include "ergoplan/mission/compiler.hpp"

#include "ergoplan/error.hpp"

namespace ergoplan::mission {

using stl::Formula;
using stl::Interval;

Formula inside(const Box3& box) {
  const Vec3 h = box.half_size();
  std::vector<Formula> faces;
  faces.reserve(6);
  for (int j = 0; j < 3; ++j) {
    // (p - lower) / h > 0 and (upper - p) / h > 0
    faces.push_back(Formula::predicate(kPositionChannels[j], 1.0 / h[j], -box.lower[j] / h[j]));
    faces.push_back(Formula::predicate(kPositionChannels[j], -1.0 / h[j], box.upper[j] / h[j]));
  }
  return Formula::conjunction(std::move(faces));
}

Formula outside(const Box3& box) { return Formula::negation(inside(box)); }

MissionFormula compile_mission(const Scenario& scenario) {
  scenario.validate();
  if (scenario.refill_stations.empty()) throw InvalidScenario("refill_stations: at least one station is required");

  const double tn = scenario.mission_time;
  const double ts = scenario.grid.sampling_period();
  const Interval horizon = Interval::make(0.0, tn);

  std::vector<std::pair<std::string, Formula>> clauses;
  std::vector<Formula> safety;

  Formula ws = inside(scenario.workspace);
  clauses.emplace_back("ws", Formula::always(horizon, ws));
  safety.push_back(ws);

  if (!scenario.obstacles.empty()) {
    std::vector<Formula> obs;
    for (const auto& b : scenario.obstacles) obs.push_back(outside(b));
    Formula all = Formula::all_of(obs);
    clauses.emplace_back("obs", Formula::always(horizon, all));
    safety.insert(safety.end(), obs.begin(), obs.end());
  }

  std::vector<Formula> behind;
  for (const auto& op : scenario.operators) behind.push_back(outside(op.behind_box));
  clauses.emplace_back("beh", Formula::always(horizon, Formula::all_of(behind)));
  safety.insert(safety.end(), behind.begin(), behind.end());

  std::vector<Formula> parts;
  parts.push_back(Formula::always(horizon, Formula::all_of(std::move(safety))));

  std::vector<Formula> handovers;
  const Interval han_window = Interval::make(0.0, tn - scenario.handover_time);
  const Interval han_hold = Interval::make(0.0, scenario.handover_time);
  for (const auto& op : scenario.operators) {
    std::vector<Formula> prefs;
    for (const auto& p : op.preferences) prefs.push_back(inside(p.box));
    Formula pref = op.combinator == PrefCombinator::kAll ? Formula::all_of(std::move(prefs))
                                                         : Formula::any_of(std::move(prefs));
    handovers.push_back(Formula::eventually(
        han_window, Formula::conjunction({pref, Formula::always(han_hold, inside(op.handover_box))})));
  }
  Formula han = Formula::all_of(handovers);
  clauses.emplace_back("han", han);
  parts.insert(parts.end(), handovers.begin(), handovers.end());

  // c is +1 while carrying and -1 when empty; "c = 0" holds where -c > 0.
  const Formula empty = Formula::predicate(kPayloadChannel, -1.0, 0.0);
  const Interval rs_window = Interval::make(0.0, tn - scenario.refill_time);
  const Interval rs_hold = Interval::make(0.0, scenario.refill_time);
  std::vector<Formula> refills;
  for (const auto& rs : scenario.refill_stations) {
    refills.push_back(Formula::eventually(
        rs_window, Formula::disjunction({Formula::negation(empty), Formula::always(rs_hold, inside(rs.box))})));
  }
  Formula refill = Formula::any_of(std::move(refills));
  clauses.emplace_back("rs", refill);
  parts.push_back(refill);

  const Interval home_window = Interval::make(ts, tn - ts);
  const Interval one_step = Interval::make(ts, ts);
  std::vector<Formula> homes;
  for (const auto& rs : scenario.refill_stations) {
    homes.push_back(Formula::always(
        home_window, Formula::disjunction({outside(rs.home), Formula::next(one_step, inside(rs.home))})));
  }
  Formula home = Formula::any_of(std::move(homes));
  clauses.emplace_back("hm", home);
  parts.push_back(home);

  return MissionFormula{Formula::all_of(std::move(parts)), std::move(clauses)};
}

Formula compile_formula(const Scenario& scenario) { return compile_mission(scenario).formula; }

stl::Signal make_signal(const dynamics::Trajectory& traj, const PayloadSignal& payload) {
  const std::size_t n = traj.grid.sample_count();
  if (payload.values.size() != n) {
    throw LengthMismatch("payload has " + std::to_string(payload.values.size()) + " samples, trajectory has " +
                         std::to_string(n));
  }
  stl::Signal s(traj.grid);
  for (int j = 0; j < 3; ++j) s.add_channel(kPositionChannels[j], traj.positions[j]);
  for (int j = 0; j < 3; ++j) s.add_channel(kVelocityChannels[j], traj.velocities[j]);
  std::vector<double> c(n);
  for (std::size_t k = 0; k < n; ++k) c[k] = payload.values[k] > 0 ? 1.0 : -1.0;
  s.add_channel(kPayloadChannel, std::move(c));
  return s;
}

}  // namespace ergoplan::mission
