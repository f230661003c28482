#pragma once

#include <array>
#include <cmath>

#include "sisph/vec3.hpp"

namespace sisph {

/// Problem dimension plus optional periodicity along each axis.
/// A period of zero means the axis is open.
struct Domain {
  int dim = 2;
  Vec3 lo{};
  Vec3 period{};  // box length along periodic axes, 0 otherwise

  bool periodic(int axis) const { return component(period, axis) > 0.0; }
  bool any_periodic() const { return period.x > 0.0 || period.y > 0.0 || period.z > 0.0; }

  /// Minimum-image separation a - b.
  Vec3 separation(const Vec3& a, const Vec3& b) const {
    Vec3 d = a - b;
    if (period.x > 0.0) d.x -= period.x * std::nearbyint(d.x / period.x);
    if (period.y > 0.0) d.y -= period.y * std::nearbyint(d.y / period.y);
    if (period.z > 0.0) d.z -= period.z * std::nearbyint(d.z / period.z);
    return d;
  }

  /// Maps a position back into [lo, lo + period) along periodic axes.
  Vec3 wrap(Vec3 p) const {
    auto w = [](double v, double lo_, double len) {
      if (len <= 0.0) return v;
      double s = v - lo_;
      s -= len * std::floor(s / len);
      if (s >= len) s -= len;
      return lo_ + s;
    };
    return {w(p.x, lo.x, period.x), w(p.y, lo.y, period.y), w(p.z, lo.z, period.z)};
  }

  static double component(const Vec3& v, int axis) {
    return axis == 0 ? v.x : (axis == 1 ? v.y : v.z);
  }
};

}  // namespace sisph
