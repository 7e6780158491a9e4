#include "horient/gate.hpp"

#include <algorithm>
#include <cmath>

namespace horient {

std::vector<PRPoint> pr_curve(std::span<const ScoredPrediction> preds) {
  if (preds.empty()) throw InvalidInputError("no predictions to rank");
  for (const auto& p : preds) {
    if (!std::isfinite(p.score)) {
      throw InvalidInputError("scores must be finite");
    }
  }
  std::vector<ScoredPrediction> sorted(preds.begin(), preds.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const ScoredPrediction& a, const ScoredPrediction& b) {
                     return a.score > b.score;
                   });
  long n_rel = 0;
  for (const auto& p : sorted) n_rel += p.reliable ? 1 : 0;

  std::vector<PRPoint> curve;
  long tp = 0, pp = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    ++pp;
    tp += sorted[i].reliable ? 1 : 0;
    const bool last_of_tie =
        i + 1 == sorted.size() || sorted[i + 1].score != sorted[i].score;
    if (last_of_tie) {
      curve.push_back({sorted[i].score,
                       static_cast<double>(tp) / static_cast<double>(pp),
                       n_rel == 0 ? 0.0
                                  : static_cast<double>(tp) /
                                        static_cast<double>(n_rel)});
    }
  }
  return curve;
}

double max_recall_at_full_precision(std::span<const PRPoint> curve) {
  if (curve.empty()) throw InvalidInputError("empty precision/recall curve");
  double best = 0.0;
  for (const auto& pt : curve) {
    if (pt.precision == 1.0) best = std::max(best, pt.recall);
  }
  return best;
}

GateEntry gate_select_entry(std::span<const GateEntry> window) {
  if (window.empty()) throw NoEstimateError("gate window is empty");
  std::size_t best = 0;
  for (std::size_t i = 1; i < window.size(); ++i) {
    // >= prefers the later frame on equal confidence
    if (window[i].confidence >= window[best].confidence) best = i;
  }
  return window[best];
}

OrientationDeg gate_select(std::span<const GateEntry> window) {
  return gate_select_entry(window).orientation;
}

TemporalGate::TemporalGate(int window) : window_(window) {
  if (window < 1) throw InvalidInputError("gate window must be at least 1");
}

OrientationDeg TemporalGate::push(OrientationDeg estimate, double confidence) {
  entries_.push_back({estimate, confidence});
  if (entries_.size() > window_) entries_.pop_front();
  return current();
}

OrientationDeg TemporalGate::current() const {
  return current_entry().orientation;
}

GateEntry TemporalGate::current_entry() const {
  return gate_select_entry(std::vector<GateEntry>(entries_.begin(), entries_.end()));
}

}  // namespace horient
