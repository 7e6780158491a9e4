#pragma once

#include <cmath>

#include "horient/errors.hpp"

namespace horient {

inline constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double deg) { return deg * (kPi / 180.0); }
inline double rad2deg(double rad) { return rad * (180.0 / kPi); }

/// Body yaw in degrees, stored normalized to [0, 360).
///
/// Convention: 0 means the person faces the camera, angles grow
/// counter-clockwise seen from above, so at 90 the person's left side
/// points toward the camera.
class OrientationDeg {
 public:
  OrientationDeg() = default;

  explicit OrientationDeg(double raw_deg) : value_(normalize(raw_deg)) {}

  double deg() const { return value_; }
  double rad() const { return deg2rad(value_); }

  friend bool operator==(OrientationDeg a, OrientationDeg b) {
    return a.value_ == b.value_;
  }
  friend bool operator!=(OrientationDeg a, OrientationDeg b) {
    return !(a == b);
  }

  static double normalize(double raw_deg) {
    if (!std::isfinite(raw_deg)) {
      throw InvalidAngleError("angle must be finite");
    }
    double r = std::fmod(raw_deg, 360.0);
    if (r < 0.0) r += 360.0;
    // fmod can return exactly 360.0 after the correction when raw is a
    // tiny negative number; fold that back onto zero.
    if (r >= 360.0) r = 0.0;
    return r;
  }

 private:
  double value_ = 0.0;
};

inline OrientationDeg normalize_deg(double raw_deg) {
  return OrientationDeg(raw_deg);
}

/// Minimal angular separation in degrees, in [0, 180].
inline double circ_diff(OrientationDeg a, OrientationDeg b) {
  double d = std::fabs(a.deg() - b.deg());
  return d > 180.0 ? 360.0 - d : d;
}

}  // namespace horient
