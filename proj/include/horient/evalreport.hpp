#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "horient/dataset.hpp"
#include "horient/gate.hpp"
#include "horient/model.hpp"

namespace horient {

/// How eval produces an orientation per sample: the trained model, an echo
/// of the ground truth (upper reference), or a seeded uniform draw (lower
/// reference).
enum class EstimatorKind { kModel, kGtEcho, kUniformRandom };

EstimatorKind parse_estimator(const std::string& s);

struct EvalSummary {
  std::int64_t n = 0;
  double acc30 = 0.0;
  double mae = 0.0;
};

EvalSummary evaluate(const ModelParams<double>* model, EstimatorKind kind,
                     const Dataset& data, std::uint64_t seed);

/// Accuracy table row: "all" first, then one row per occlusion mode present
/// in the dataset, in order of first appearance.
struct ModeReport {
  std::string mode;
  std::int64_t n = 0;
  double acc5 = 0.0;
  double acc15 = 0.0;
  double acc30 = 0.0;
  double mae = 0.0;
};

std::vector<ModeReport> mode_reports(const ModelParams<double>* model,
                                     EstimatorKind kind, const Dataset& data,
                                     std::uint64_t seed);

/// mode,n,acc5,acc15,acc30,mae
void write_eval_csv(const std::string& path, const std::vector<ModeReport>& rows);

/// Fixed-width text rendering of the same table.
std::string format_eval_table(const std::vector<ModeReport>& rows);

/// One row per sample with everything confidence-gated evaluation needs.
struct ConfidenceRow {
  std::int64_t id = 0;
  OrientationDeg pred;
  OrientationDeg gt;
  double confidence = 0.0;
  double max_prob = 0.0;
  bool is_reliable = false;
};

std::vector<ConfidenceRow> confidence_rows(const ModelParams<double>& model,
                                           const Dataset& data);

std::vector<ScoredPrediction> scores_from(const std::vector<ConfidenceRow>& rows,
                                          bool use_confidence);

/// threshold,precision,recall
void write_pr_csv(const std::string& path, const std::vector<PRPoint>& curve);

/// {"max_recall_at_p100":...,"n":...,"score_kind":...}
void write_pr_summary(const std::string& path, double max_recall,
                      std::int64_t n, const std::string& score_kind);

}  // namespace horient
