#pragma once

#include <cstddef>

namespace ergoplan::stl {

/// Uniform sampling of the horizon [0, T_N] with `sample_count` states.
class TimeGrid {
 public:
  /// Throws std::invalid_argument unless sampling_period > 0 and sample_count >= 2.
  TimeGrid(double sampling_period, std::size_t sample_count);

  /// Grid covering [0, horizon]; throws std::invalid_argument if the horizon
  /// is not an integer multiple of the period.
  static TimeGrid from_horizon(double sampling_period, double horizon);

  [[nodiscard]] double sampling_period() const { return sampling_period_; }
  [[nodiscard]] std::size_t sample_count() const { return sample_count_; }
  /// Number of transitions N.
  [[nodiscard]] std::size_t steps() const { return sample_count_ - 1; }
  [[nodiscard]] double horizon() const { return sampling_period_ * static_cast<double>(steps()); }
  [[nodiscard]] double time(std::size_t k) const { return sampling_period_ * static_cast<double>(k); }

  /// Nearest sample count for a duration; exact ties round toward the lower count.
  [[nodiscard]] std::size_t samples_in(double seconds) const;

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  double sampling_period_;
  std::size_t sample_count_;
};

}  // namespace ergoplan::stl
