#pragma once

#include <cmath>
#include <numbers>

namespace marlin {

inline constexpr double kPi = std::numbers::pi;

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  if (a > kPi) a -= 2.0 * kPi;
  return a;
}

/// Shortest signed difference a - b, wrapped to (-pi, pi].
inline double wrap_angle_diff(double a, double b) { return wrap_angle(a - b); }

}  // namespace marlin
