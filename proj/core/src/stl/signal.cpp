#include "ergoplan/stl/signal.hpp"

#include <algorithm>
#include <stdexcept>

#include "ergoplan/error.hpp"

namespace ergoplan::stl {

void Signal::add_channel(std::string name, std::vector<double> values) {
  if (find(name) >= 0) throw std::invalid_argument("duplicate channel '" + name + "'");
  if (values.size() != grid_.sample_count()) {
    throw std::invalid_argument("channel '" + name + "' has " + std::to_string(values.size()) +
                                " samples, grid has " + std::to_string(grid_.sample_count()));
  }
  names_.push_back(std::move(name));
  values_.push_back(std::move(values));
}

int Signal::find(std::string_view name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  return it == names_.end() ? -1 : static_cast<int>(it - names_.begin());
}

std::size_t Signal::index_of(std::string_view name) const {
  const int i = find(name);
  if (i < 0) throw UnknownChannel("signal has no channel '" + std::string(name) + "'");
  return static_cast<std::size_t>(i);
}

}  // namespace ergoplan::stl
