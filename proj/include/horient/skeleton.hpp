#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <string>

#include "horient/angle.hpp"
#include "horient/errors.hpp"

namespace horient {

/// Keypoint layout: the 17 COCO body joints followed by 6 foot joints
/// (big toe, small toe, heel; left then right).
inline constexpr int kNumJoints = 23;
inline constexpr int kNumBodyJoints = 17;

const char* joint_name(int joint);

struct Joint {
  double x = 0.0;
  double y = 0.0;
  bool visible = false;
};

struct Skeleton23 {
  std::array<Joint, kNumJoints> joints;

  int visible_count() const {
    int n = 0;
    for (const auto& j : joints) n += j.visible ? 1 : 0;
    return n;
  }
};

enum class OcclusionKind { kFull, kLowerOnly, kUpperOnly, kRandomDrop };

struct OcclusionMode {
  OcclusionKind kind = OcclusionKind::kFull;
  double drop_prob = 0.0;  // only meaningful for kRandomDrop, in [0, 1)

  static OcclusionMode full() { return {OcclusionKind::kFull, 0.0}; }
  static OcclusionMode lower_only() { return {OcclusionKind::kLowerOnly, 0.0}; }
  static OcclusionMode upper_only() { return {OcclusionKind::kUpperOnly, 0.0}; }
  static OcclusionMode random_drop(double p) {
    return {OcclusionKind::kRandomDrop, p};
  }

  /// Wire form: "full", "lower", "upper" or "drop:<p>".
  std::string str() const;
  static OcclusionMode parse(const std::string& s);

  friend bool operator==(const OcclusionMode& a, const OcclusionMode& b) {
    return a.kind == b.kind && a.drop_prob == b.drop_prob;
  }
};

struct Sample {
  Skeleton23 skeleton;
  OrientationDeg gt_orientation;
  OcclusionMode mode;
  std::int64_t id = 0;
};

/// Canonical standing pose, one row per joint: x is lateral (person's left
/// positive), y points forward out of the chest, z is up. Meters.
const Eigen::Matrix<double, kNumJoints, 3>& template_skeleton();

/// Vertical extent of the template, used to scale coordinate noise.
double template_height();

/// Renders the template at yaw theta under an occlusion mode.
///
/// Projection is orthographic: image_x = y*sin(theta) + x*cos(theta),
/// image_y = -z, so at theta = 0 the person faces the camera with their
/// left side on the right of the image, and image y grows downward.
/// Gaussian noise with std noise_sigma * template_height() is added to both
/// image coordinates of every joint before occlusion. Visible coordinates
/// are then min-max normalized per axis to [0, 1] over the visible joints
/// (an axis with extent below 1e-12 collapses to 0.5). Hidden joints come
/// back as (0, 0, visible=false).
///
/// All randomness derives from `seed`; noise draws use a stream separate
/// from occlusion draws, so re-rendering with OcclusionMode::full() and the
/// same seed reproduces the pre-occlusion joints exactly.
Sample synthesize(OrientationDeg theta, const OcclusionMode& mode,
                  double noise_sigma, std::uint64_t seed, std::int64_t id = 0);

}  // namespace horient
