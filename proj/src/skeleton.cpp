#include "horient/skeleton.hpp"

#include <json.hpp>

#include "horient/rng.hpp"

namespace horient {

namespace {

constexpr const char* kJointNames[kNumJoints] = {
    "nose",
    "left_eye",
    "right_eye",
    "left_ear",
    "right_ear",
    "left_shoulder",
    "right_shoulder",
    "left_elbow",
    "right_elbow",
    "left_wrist",
    "right_wrist",
    "left_hip",
    "right_hip",
    "left_knee",
    "right_knee",
    "left_ankle",
    "right_ankle",
    "left_big_toe",
    "left_small_toe",
    "left_heel",
    "right_big_toe",
    "right_small_toe",
    "right_heel",
};

// hips sit at this height; "lower body" means z <= hip height
constexpr double kHipZ = 0.95;

}  // namespace

const char* joint_name(int joint) {
  if (joint < 0 || joint >= kNumJoints) {
    throw InvalidInputError("joint index out of range");
  }
  return kJointNames[joint];
}

const Eigen::Matrix<double, kNumJoints, 3>& template_skeleton() {
  static const Eigen::Matrix<double, kNumJoints, 3> t = [] {
    Eigen::Matrix<double, kNumJoints, 3> m;
    // clang-format off
    m <<  0.000,  0.080, 1.620,   // nose
          0.035,  0.070, 1.660,   // left_eye
         -0.035,  0.070, 1.660,   // right_eye
          0.070,  0.000, 1.640,   // left_ear
         -0.070,  0.000, 1.640,   // right_ear
          0.200,  0.000, 1.450,   // left_shoulder
         -0.200,  0.000, 1.450,   // right_shoulder
          0.250,  0.030, 1.200,   // left_elbow
         -0.250,  0.030, 1.200,   // right_elbow
          0.270,  0.080, 1.000,   // left_wrist
         -0.270,  0.080, 1.000,   // right_wrist
          0.110,  0.000, 0.950,   // left_hip
         -0.110,  0.000, 0.950,   // right_hip
          0.120,  0.020, 0.500,   // left_knee
         -0.120,  0.020, 0.500,   // right_knee
          0.130,  0.000, 0.080,   // left_ankle
         -0.130,  0.000, 0.080,   // right_ankle
          0.120,  0.160, 0.020,   // left_big_toe
          0.170,  0.140, 0.020,   // left_small_toe
          0.130, -0.050, 0.000,   // left_heel
         -0.120,  0.160, 0.020,   // right_big_toe
         -0.170,  0.140, 0.020,   // right_small_toe
         -0.130, -0.050, 0.000;   // right_heel
    // clang-format on
    return m;
  }();
  return t;
}

double template_height() {
  const auto& t = template_skeleton();
  return t.col(2).maxCoeff() - t.col(2).minCoeff();
}

std::string OcclusionMode::str() const {
  switch (kind) {
    case OcclusionKind::kFull:
      return "full";
    case OcclusionKind::kLowerOnly:
      return "lower";
    case OcclusionKind::kUpperOnly:
      return "upper";
    case OcclusionKind::kRandomDrop:
      return "drop:" + nlohmann::json(drop_prob).dump();
  }
  throw InvalidInputError("unknown occlusion kind");
}

OcclusionMode OcclusionMode::parse(const std::string& s) {
  if (s == "full") return full();
  if (s == "lower") return lower_only();
  if (s == "upper") return upper_only();
  if (s.rfind("drop:", 0) == 0) {
    double p = 0.0;
    try {
      std::size_t used = 0;
      p = std::stod(s.substr(5), &used);
      if (used != s.size() - 5) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw InvalidInputError("bad drop probability in mode string: " + s);
    }
    if (!(p >= 0.0 && p < 1.0)) {
      throw InvalidInputError("drop probability must be in [0, 1)");
    }
    return random_drop(p);
  }
  throw InvalidInputError("unknown occlusion mode: " + s);
}

Sample synthesize(OrientationDeg theta, const OcclusionMode& mode,
                  double noise_sigma, std::uint64_t seed, std::int64_t id) {
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw InvalidInputError("noise_sigma must be non-negative and finite");
  }
  if (mode.kind == OcclusionKind::kRandomDrop &&
      !(mode.drop_prob >= 0.0 && mode.drop_prob < 1.0)) {
    throw InvalidInputError("drop probability must be in [0, 1)");
  }

  const auto& tmpl = template_skeleton();
  const double s = std::sin(theta.rad());
  const double c = std::cos(theta.rad());

  std::array<double, kNumJoints> ix{};
  std::array<double, kNumJoints> iy{};
  for (int j = 0; j < kNumJoints; ++j) {
    ix[j] = tmpl(j, 1) * s + tmpl(j, 0) * c;
    iy[j] = -tmpl(j, 2);
  }

  if (noise_sigma > 0.0) {
    Rng noise(seed, "noise");
    const double std_m = noise_sigma * template_height();
    for (int j = 0; j < kNumJoints; ++j) {
      ix[j] += noise.normal(0.0, std_m);
      iy[j] += noise.normal(0.0, std_m);
    }
  }

  std::array<bool, kNumJoints> vis{};
  switch (mode.kind) {
    case OcclusionKind::kFull:
      vis.fill(true);
      break;
    case OcclusionKind::kLowerOnly:
      for (int j = 0; j < kNumJoints; ++j) vis[j] = tmpl(j, 2) <= kHipZ;
      break;
    case OcclusionKind::kUpperOnly:
      for (int j = 0; j < kNumJoints; ++j) vis[j] = tmpl(j, 2) > kHipZ;
      break;
    case OcclusionKind::kRandomDrop: {
      Rng occ(seed, "occlusion");
      bool any = false;
      while (!any) {  // never hand back an all-hidden skeleton
        for (int j = 0; j < kNumJoints; ++j) {
          vis[j] = occ.uniform01() >= mode.drop_prob;
          any = any || vis[j];
        }
      }
      break;
    }
  }

  double min_x = 0.0, max_x = 0.0, min_y = 0.0, max_y = 0.0;
  bool first = true;
  for (int j = 0; j < kNumJoints; ++j) {
    if (!vis[j]) continue;
    if (first) {
      min_x = max_x = ix[j];
      min_y = max_y = iy[j];
      first = false;
    } else {
      min_x = std::min(min_x, ix[j]);
      max_x = std::max(max_x, ix[j]);
      min_y = std::min(min_y, iy[j]);
      max_y = std::max(max_y, iy[j]);
    }
  }

  constexpr double kMinExtent = 1e-12;
  const double ex = max_x - min_x;
  const double ey = max_y - min_y;

  Sample out;
  out.gt_orientation = theta;
  out.mode = mode;
  out.id = id;
  for (int j = 0; j < kNumJoints; ++j) {
    if (!vis[j]) continue;
    Joint& jt = out.skeleton.joints[j];
    jt.visible = true;
    jt.x = ex < kMinExtent ? 0.5 : (ix[j] - min_x) / ex;
    jt.y = ey < kMinExtent ? 0.5 : (iy[j] - min_y) / ey;
  }
  return out;
}

}  // namespace horient
