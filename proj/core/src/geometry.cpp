#include "ergoplan/geometry.hpp"

#include <algorithm>
#include <sstream>

#include "ergoplan/error.hpp"

namespace ergoplan {

Box3 Box3::from_bounds(const Vec3& lower, const Vec3& upper) {
  for (int j = 0; j < 3; ++j) {
    if (!(lower[j] < upper[j])) {
      throw InvalidScenario("box lower " + to_string(lower) + " is not below upper " + to_string(upper));
    }
  }
  return Box3{lower, upper};
}

Box3 Box3::centered(const Vec3& center, const Vec3& size) {
  return from_bounds(center - 0.5 * size, center + 0.5 * size);
}

bool Box3::contains(const Vec3& p) const {
  for (int j = 0; j < 3; ++j) {
    if (!(lower[j] < p[j] && p[j] < upper[j])) return false;
  }
  return true;
}

bool Box3::contains(const Box3& other) const {
  for (int j = 0; j < 3; ++j) {
    if (other.lower[j] < lower[j] || other.upper[j] > upper[j]) return false;
  }
  return true;
}

bool Box3::intersects(const Box3& other) const {
  for (int j = 0; j < 3; ++j) {
    if (!(lower[j] < other.upper[j] && other.lower[j] < upper[j])) return false;
  }
  return true;
}

bool segment_intersects(const Vec3& a, const Vec3& b, const Box3& box) {
  // Slab clipping of the parameter range [0, 1] against each open slab.
  double t0 = 0.0;
  double t1 = 1.0;
  for (int j = 0; j < 3; ++j) {
    const double d = b[j] - a[j];
    if (d == 0.0) {
      if (!(box.lower[j] < a[j] && a[j] < box.upper[j])) return false;
      continue;
    }
    double lo = (box.lower[j] - a[j]) / d;
    double hi = (box.upper[j] - a[j]) / d;
    if (lo > hi) std::swap(lo, hi);
    t0 = std::max(t0, lo);
    t1 = std::min(t1, hi);
    if (!(t0 < t1)) return false;
  }
  return true;
}

std::string to_string(const Vec3& v) {
  std::ostringstream os;
  os << '(' << v[0] << ", " << v[1] << ", " << v[2] << ')';
  return os.str();
}

}  // namespace ergoplan
