#pragma once

#include <Eigen/Core>
#include <cmath>
#include <span>

#include "horient/angle.hpp"
#include "horient/errors.hpp"

namespace horient {

/// Orientation is discretized into 72 bins of 5 degrees. Bin i is centered
/// on 5*i degrees and covers [5i - 2.5, 5i + 2.5); bin 0 wraps across zero.
inline constexpr int kNumBins = 72;
inline constexpr double kBinWidthDeg = 360.0 / kNumBins;

template <class S>
using Dist = Eigen::Matrix<S, kNumBins, 1>;
using Distd = Dist<double>;
using Distf = Dist<float>;

inline int deg_to_bin(OrientationDeg theta) {
  int bin = static_cast<int>(std::floor((theta.deg() + kBinWidthDeg / 2.0) /
                                        kBinWidthDeg));
  return bin % kNumBins;
}

inline OrientationDeg bin_to_deg(int bin) {
  if (bin < 0 || bin >= kNumBins) {
    throw InvalidInputError("bin index out of range");
  }
  return OrientationDeg(bin * kBinWidthDeg);
}

/// Circular distance between bin indices, in bins; at most 36.
inline int circ_bin_dist(int i, int l) {
  if (i < 0 || i >= kNumBins || l < 0 || l >= kNumBins) {
    throw InvalidInputError("bin index out of range");
  }
  int d = std::abs(i - l);
  return d <= kNumBins - d ? d : kNumBins - d;
}

/// Soft target distribution: a Gaussian bump over circular bin distance,
/// renormalized to sum to one.
///
/// Values are computed from a per-distance table so that p[i] depends only
/// on circ_bin_dist(i, l). Rotating the ground-truth bin therefore permutes
/// the vector without changing any entry, bit for bit.
inline Distd circular_gaussian(int l, double sigma_bins) {
  if (l < 0 || l >= kNumBins) {
    throw InvalidInputError("bin index out of range");
  }
  if (!(sigma_bins > 0.0) || !std::isfinite(sigma_bins)) {
    throw InvalidInputError("sigma_bins must be positive and finite");
  }
  constexpr int kMaxDist = kNumBins / 2;
  double table[kMaxDist + 1];
  double norm = 0.0;
  for (int d = 0; d <= kMaxDist; ++d) {
    table[d] = std::exp(-static_cast<double>(d) * d /
                        (2.0 * sigma_bins * sigma_bins));
    // distances 1..35 occur twice around the circle, 0 and 36 once
    norm += (d == 0 || d == kMaxDist) ? table[d] : 2.0 * table[d];
  }
  Distd p;
  for (int i = 0; i < kNumBins; ++i) {
    p[i] = table[circ_bin_dist(i, l)] / norm;
  }
  return p;
}

/// Mode of a bin distribution as an angle. Ties break toward the lowest
/// bin index.
template <class Derived>
OrientationDeg decode_orientation(const Eigen::MatrixBase<Derived>& dist) {
  static_assert(Derived::RowsAtCompileTime == kNumBins ||
                Derived::RowsAtCompileTime == Eigen::Dynamic);
  if (dist.size() != kNumBins) {
    throw InvalidInputError("distribution must have 72 entries");
  }
  int best = 0;
  auto best_val = dist[0];
  for (int i = 1; i < kNumBins; ++i) {
    if (dist[i] > best_val) {
      best = i;
      best_val = dist[i];
    }
  }
  return bin_to_deg(best);
}

/// Fraction of predictions within tol_deg of ground truth (inclusive).
inline double accuracy_at(std::span<const OrientationDeg> pred,
                          std::span<const OrientationDeg> gt, double tol_deg) {
  if (pred.empty() || pred.size() != gt.size()) {
    throw InvalidInputError("prediction/ground-truth lists must be non-empty and equal length");
  }
  std::size_t hits = 0;
  for (std::size_t k = 0; k < pred.size(); ++k) {
    if (circ_diff(pred[k], gt[k]) <= tol_deg) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(pred.size());
}

/// Mean absolute circular error in degrees.
inline double mean_abs_error(std::span<const OrientationDeg> pred,
                             std::span<const OrientationDeg> gt) {
  if (pred.empty() || pred.size() != gt.size()) {
    throw InvalidInputError("prediction/ground-truth lists must be non-empty and equal length");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < pred.size(); ++k) {
    sum += circ_diff(pred[k], gt[k]);
  }
  return sum / static_cast<double>(pred.size());
}

}  // namespace horient
