#pragma once

#include <deque>
#include <span>
#include <vector>

#include "horient/angle.hpp"
#include "horient/circular.hpp"
#include "horient/errors.hpp"

namespace horient {

/// A prediction counts as reliable within this many degrees of ground truth.
inline constexpr double kReliableTolDeg = 20.0;

inline bool reliable(OrientationDeg pred, OrientationDeg gt,
                     double tol_deg = kReliableTolDeg) {
  return circ_diff(pred, gt) <= tol_deg;
}

/// Peak probability of a bin distribution, the confidence-free baseline
/// score for reliability ranking.
template <class Derived>
double max_prob_score(const Eigen::MatrixBase<Derived>& dist) {
  if (dist.size() != kNumBins) {
    throw InvalidInputError("distribution must have 72 entries");
  }
  return static_cast<double>(dist.maxCoeff());
}

struct ScoredPrediction {
  double score = 0.0;
  bool reliable = false;
};

struct PRPoint {
  double threshold = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

/// Precision/recall over score thresholds, one point per distinct score,
/// descending; a prediction is positive when score >= threshold, so tied
/// scores enter together. With no reliable predictions at all every recall
/// is reported as zero.
std::vector<PRPoint> pr_curve(std::span<const ScoredPrediction> preds);

/// Largest recall among curve points with precision exactly one; zero when
/// the curve never reaches full precision.
double max_recall_at_full_precision(std::span<const PRPoint> curve);

struct GateEntry {
  OrientationDeg orientation;
  double confidence = 0.0;
};

/// Most-confident entry wins; on ties the most recent one.
GateEntry gate_select_entry(std::span<const GateEntry> window);
OrientationDeg gate_select(std::span<const GateEntry> window);

/// Sliding window over per-frame estimates that exposes the gated one.
class TemporalGate {
 public:
  explicit TemporalGate(int window = 5);

  /// Records one frame and returns the gated estimate.
  OrientationDeg push(OrientationDeg estimate, double confidence);

  bool has_estimate() const { return !entries_.empty(); }
  OrientationDeg current() const;
  GateEntry current_entry() const;

 private:
  std::size_t window_;
  std::deque<GateEntry> entries_;
};

}  // namespace horient
