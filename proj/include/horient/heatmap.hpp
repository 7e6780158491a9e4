#pragma once

#include <Eigen/Core>
#include <cmath>

#include "horient/errors.hpp"
#include "horient/skeleton.hpp"

namespace horient {

template <class S>
using VecX = Eigen::Matrix<S, Eigen::Dynamic, 1>;

/// Per-joint Gaussian heatmaps, flattened joint-major then row-major:
/// flat index = joint * width * height + py * width + px.
template <class S>
struct HeatmapSet {
  int joints = 0;
  int width = 0;
  int height = 0;
  VecX<S> data;

  S at(int joint, int px, int py) const {
    return data[(joint * height + py) * width + px];
  }
};

/// Writes heatmaps for one skeleton into a preallocated flat vector of size
/// joints * width * height. Joint (x, y) in normalized [0, 1] coordinates
/// maps to pixel-center position (x * width, y * height); each visible
/// joint contributes exp(-((px-cx)^2 + (py-cy)^2) / (2 sigma^2)) sampled at
/// integer pixel positions, hidden joints an all-zero map. The bump is
/// separable, so rows/columns are built as two 1-d profiles.
template <class S, class Out>
void write_heatmaps(const Skeleton23& skel, int joints, int width, int height,
                    S sigma_px, Eigen::MatrixBase<Out> const& out_) {
  auto& out = const_cast<Eigen::MatrixBase<Out>&>(out_);
  if (joints < 1 || joints > kNumJoints || width < 1 || height < 1) {
    throw InvalidInputError("bad heatmap dimensions");
  }
  if (!(sigma_px > S(0))) {
    throw InvalidInputError("heatmap sigma must be positive");
  }
  if (out.size() != static_cast<Eigen::Index>(joints) * width * height) {
    throw InvalidInputError("heatmap output buffer has wrong size");
  }
  const S inv = S(1) / (S(2) * sigma_px * sigma_px);
  VecX<S> gx(width), gy(height);
  for (int j = 0; j < joints; ++j) {
    const Joint& jt = skel.joints[j];
    Eigen::Index base = static_cast<Eigen::Index>(j) * width * height;
    if (!jt.visible) {
      out.segment(base, static_cast<Eigen::Index>(width) * height).setZero();
      continue;
    }
    const S cx = S(jt.x) * S(width);
    const S cy = S(jt.y) * S(height);
    for (int px = 0; px < width; ++px) {
      const S d = S(px) - cx;
      gx[px] = std::exp(-d * d * inv);
    }
    for (int py = 0; py < height; ++py) {
      const S d = S(py) - cy;
      gy[py] = std::exp(-d * d * inv);
    }
    for (int py = 0; py < height; ++py) {
      out.segment(base + static_cast<Eigen::Index>(py) * width, width) =
          gy[py] * gx;
    }
  }
}

template <class S>
HeatmapSet<S> make_heatmaps(const Skeleton23& skel, int width, int height,
                            S sigma_px, int joints = kNumJoints) {
  HeatmapSet<S> h;
  h.joints = joints;
  h.width = width;
  h.height = height;
  h.data.resize(static_cast<Eigen::Index>(joints) * width * height);
  write_heatmaps<S>(skel, joints, width, height, sigma_px, h.data);
  return h;
}

}  // namespace horient
