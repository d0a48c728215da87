#include "ergoplan/stl/time_grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ergoplan::stl {

TimeGrid::TimeGrid(double sampling_period, std::size_t sample_count)
    : sampling_period_(sampling_period), sample_count_(sample_count) {
  if (!(sampling_period > 0.0) || !std::isfinite(sampling_period)) {
    throw std::invalid_argument("sampling period must be positive, got " + std::to_string(sampling_period));
  }
  if (sample_count < 2) {
    throw std::invalid_argument("time grid needs at least 2 samples, got " + std::to_string(sample_count));
  }
}

TimeGrid TimeGrid::from_horizon(double sampling_period, double horizon) {
  if (!(sampling_period > 0.0) || !(horizon > 0.0)) {
    throw std::invalid_argument("sampling period and horizon must be positive");
  }
  const double steps = std::round(horizon / sampling_period);
  if (std::abs(steps * sampling_period - horizon) > 1e-9 * std::max(1.0, horizon)) {
    throw std::invalid_argument("horizon " + std::to_string(horizon) +
                                " is not a multiple of the sampling period " + std::to_string(sampling_period));
  }
  return TimeGrid(sampling_period, static_cast<std::size_t>(steps) + 1);
}

std::size_t TimeGrid::samples_in(double seconds) const {
  if (seconds < 0.0) throw std::invalid_argument("negative duration");
  // ceil(x - 0.5) rounds to nearest with ties going down.
  const double x = seconds / sampling_period_;
  const double r = std::ceil(x - 0.5);
  return r <= 0.0 ? 0 : static_cast<std::size_t>(r);
}

}  // namespace ergoplan::stl
