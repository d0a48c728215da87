#include "ergoplan/mission/payload.hpp"

#include <algorithm>

namespace ergoplan::mission {

PayloadSignal derive_payload(const dynamics::Trajectory& traj, const Scenario& scenario) {
  const std::size_t n = traj.grid.sample_count();
  const std::size_t need_han = traj.grid.samples_in(scenario.handover_time) + 1;
  const std::size_t need_rs = traj.grid.samples_in(scenario.refill_time) + 1;

  std::vector<std::size_t> han_run(scenario.operators.size(), 0);
  std::vector<char> served(scenario.operators.size(), 0);
  std::vector<std::size_t> rs_run(scenario.refill_stations.size(), 0);

  PayloadSignal out;
  out.values.resize(n);
  int c = scenario.capacity;
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = c;
    const Vec3 p = traj.position(k);
    // Completions observed at k take effect from k + 1.
    for (std::size_t o = 0; o < scenario.operators.size(); ++o) {
      han_run[o] = scenario.operators[o].handover_box.contains(p) ? han_run[o] + 1 : 0;
      if (!served[o] && han_run[o] >= need_han) {
        served[o] = 1;
        c = std::max(c - 1, 0);
      }
    }
    for (std::size_t r = 0; r < scenario.refill_stations.size(); ++r) {
      rs_run[r] = scenario.refill_stations[r].box.contains(p) ? rs_run[r] + 1 : 0;
      if (rs_run[r] >= need_rs) c = scenario.capacity;
    }
  }
  return out;
}

}  // namespace ergoplan::mission
