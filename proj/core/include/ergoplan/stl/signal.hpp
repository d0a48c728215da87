#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ergoplan/stl/time_grid.hpp"

namespace ergoplan::stl {

/// A set of named real-valued channels sampled on a common grid.
class Signal {
 public:
  explicit Signal(TimeGrid grid) : grid_(grid) {}

  /// Adds a channel; throws std::invalid_argument on a duplicate name or a
  /// length different from the grid's sample count.
  void add_channel(std::string name, std::vector<double> values);

  [[nodiscard]] const TimeGrid& grid() const { return grid_; }
  [[nodiscard]] std::size_t channel_count() const { return names_.size(); }
  [[nodiscard]] const std::vector<std::string>& channel_names() const { return names_; }

  /// Index of a channel, or -1 when absent.
  [[nodiscard]] int find(std::string_view name) const;
  /// Throws UnknownChannel when absent.
  [[nodiscard]] std::size_t index_of(std::string_view name) const;

  [[nodiscard]] std::span<const double> channel(std::size_t index) const { return values_[index]; }
  [[nodiscard]] std::span<const double> channel(std::string_view name) const {
    return values_[index_of(name)];
  }
  [[nodiscard]] std::span<double> mutable_channel(std::size_t index) { return values_[index]; }

 private:
  TimeGrid grid_;
  std::vector<std::string> names_;
  std::vector<std::vector<double>> values_;
};

}  // namespace ergoplan::stl
