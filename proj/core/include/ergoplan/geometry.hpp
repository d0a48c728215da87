#pragma once

#include <array>
#include <cmath>
#include <string>

namespace ergoplan {

using Vec3 = std::array<double, 3>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }

inline double norm(const Vec3& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]); }
inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

/// Axis-aligned box. Membership is strict (open box) to match the in-box
/// predicates used by the mission formula.
struct Box3 {
  Vec3 lower{};
  Vec3 upper{};

  /// Throws InvalidScenario unless lower < upper on every axis.
  static Box3 from_bounds(const Vec3& lower, const Vec3& upper);
  static Box3 centered(const Vec3& center, const Vec3& size);

  [[nodiscard]] Vec3 center() const { return 0.5 * (lower + upper); }
  [[nodiscard]] Vec3 half_size() const { return 0.5 * (upper - lower); }
  [[nodiscard]] bool contains(const Vec3& p) const;
  [[nodiscard]] bool contains(const Box3& other) const;
  /// True iff the open interiors overlap.
  [[nodiscard]] bool intersects(const Box3& other) const;
  [[nodiscard]] Box3 translated(const Vec3& offset) const { return {lower + offset, upper + offset}; }

  friend bool operator==(const Box3&, const Box3&) = default;
};

/// Whether the closed segment [a, b] passes through the open box.
bool segment_intersects(const Vec3& a, const Vec3& b, const Box3& box);

std::string to_string(const Vec3& v);

}  // namespace ergoplan
