#include "horient/evalreport.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <json.hpp>

#include "horient/format.hpp"
#include "horient/rng.hpp"

namespace horient {

EstimatorKind parse_estimator(const std::string& s) {
  if (s == "model") return EstimatorKind::kModel;
  if (s == "gt-echo") return EstimatorKind::kGtEcho;
  if (s == "uniform-random") return EstimatorKind::kUniformRandom;
  throw ConfigError("unknown estimator: " + s);
}

namespace {

std::vector<OrientationDeg> model_predictions(const ModelParams<double>& m,
                                              const Dataset& data) {
  const Eigen::Index n = static_cast<Eigen::Index>(data.samples.size());
  const Eigen::Index chunk = 256;
  std::vector<OrientationDeg> preds(n);
  MatX<double> x(m.config.input_size(), std::min(chunk, n));
  for (Eigen::Index start = 0; start < n; start += chunk) {
    const Eigen::Index b = std::min(chunk, n - start);
    for (Eigen::Index j = 0; j < b; ++j) {
      x.col(j) = input_from_skeleton<double>(data.samples[start + j].skeleton,
                                             m.config.joints);
    }
    auto f = forward_batch(m, MatX<double>(x.leftCols(b)), false);
    for (Eigen::Index j = 0; j < b; ++j) {
      preds[start + j] = decode_orientation(f.p_hat.col(j));
    }
  }
  return preds;
}

}  // namespace

namespace {

std::vector<OrientationDeg> estimator_predictions(
    const ModelParams<double>* model, EstimatorKind kind, const Dataset& data,
    std::uint64_t seed) {
  if (data.samples.empty()) throw InvalidInputError("empty dataset");
  switch (kind) {
    case EstimatorKind::kModel: {
      if (model == nullptr) {
        throw InvalidInputError("model estimator needs a checkpoint");
      }
      return model_predictions(*model, data);
    }
    case EstimatorKind::kGtEcho: {
      std::vector<OrientationDeg> preds;
      preds.reserve(data.samples.size());
      for (const auto& s : data.samples) preds.push_back(s.gt_orientation);
      return preds;
    }
    case EstimatorKind::kUniformRandom: {
      std::vector<OrientationDeg> preds;
      preds.reserve(data.samples.size());
      for (const auto& s : data.samples) {
        Rng rng(seed, "uniform_eval", static_cast<std::uint64_t>(s.id));
        preds.emplace_back(rng.uniform(0.0, 360.0));
      }
      return preds;
    }
  }
  throw InvalidInputError("unknown estimator kind");
}

}  // namespace

EvalSummary evaluate(const ModelParams<double>* model, EstimatorKind kind,
                     const Dataset& data, std::uint64_t seed) {
  std::vector<OrientationDeg> preds = estimator_predictions(model, kind, data, seed);
  std::vector<OrientationDeg> gts;
  gts.reserve(data.samples.size());
  for (const auto& s : data.samples) gts.push_back(s.gt_orientation);

  EvalSummary out;
  out.n = static_cast<std::int64_t>(preds.size());
  out.acc30 = accuracy_at(preds, gts, 30.0);
  out.mae = mean_abs_error(preds, gts);
  return out;
}

std::vector<ModeReport> mode_reports(const ModelParams<double>* model,
                                     EstimatorKind kind, const Dataset& data,
                                     std::uint64_t seed) {
  std::vector<OrientationDeg> preds = estimator_predictions(model, kind, data, seed);

  // group sample indices: "all" first, then modes by first appearance
  std::vector<std::pair<std::string, std::vector<std::size_t>>> groups;
  groups.emplace_back("all", std::vector<std::size_t>{});
  for (std::size_t i = 0; i < data.samples.size(); ++i) {
    groups[0].second.push_back(i);
    const std::string mode = data.samples[i].mode.str();
    auto it = std::find_if(groups.begin() + 1, groups.end(),
                           [&](const auto& g) { return g.first == mode; });
    if (it == groups.end()) {
      groups.emplace_back(mode, std::vector<std::size_t>{i});
    } else {
      it->second.push_back(i);
    }
  }

  std::vector<ModeReport> rows;
  for (const auto& [mode, idx] : groups) {
    std::vector<OrientationDeg> p, g;
    p.reserve(idx.size());
    g.reserve(idx.size());
    for (std::size_t i : idx) {
      p.push_back(preds[i]);
      g.push_back(data.samples[i].gt_orientation);
    }
    ModeReport r;
    r.mode = mode;
    r.n = static_cast<std::int64_t>(idx.size());
    r.acc5 = accuracy_at(p, g, 5.0);
    r.acc15 = accuracy_at(p, g, 15.0);
    r.acc30 = accuracy_at(p, g, 30.0);
    r.mae = mean_abs_error(p, g);
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_eval_csv(const std::string& path, const std::vector<ModeReport>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "mode,n,acc5,acc15,acc30,mae\n";
  for (const ModeReport& r : rows) {
    out << r.mode << ',' << r.n << ',' << fmt_g9(r.acc5) << ','
        << fmt_g9(r.acc15) << ',' << fmt_g9(r.acc30) << ',' << fmt_g9(r.mae)
        << '\n';
  }
  if (!out) throw IoError("failed writing " + path);
}

std::string format_eval_table(const std::vector<ModeReport>& rows) {
  std::string s = "mode           n   acc5  acc15  acc30   mae_deg\n";
  char buf[128];
  for (const ModeReport& r : rows) {
    std::snprintf(buf, sizeof buf, "%-10s %5lld  %5.3f  %5.3f  %5.3f  %8.3f\n",
                  r.mode.c_str(), static_cast<long long>(r.n), r.acc5, r.acc15,
                  r.acc30, r.mae);
    s += buf;
  }
  return s;
}

std::vector<ConfidenceRow> confidence_rows(const ModelParams<double>& m,
                                           const Dataset& data) {
  if (data.samples.empty()) throw InvalidInputError("empty dataset");
  const Eigen::Index n = static_cast<Eigen::Index>(data.samples.size());
  const Eigen::Index chunk = 256;
  std::vector<ConfidenceRow> rows(n);
  MatX<double> x(m.config.input_size(), std::min(chunk, n));
  for (Eigen::Index start = 0; start < n; start += chunk) {
    const Eigen::Index b = std::min(chunk, n - start);
    for (Eigen::Index j = 0; j < b; ++j) {
      x.col(j) = input_from_skeleton<double>(data.samples[start + j].skeleton,
                                             m.config.joints);
    }
    auto f = forward_batch(m, MatX<double>(x.leftCols(b)), false);
    for (Eigen::Index j = 0; j < b; ++j) {
      const Sample& s = data.samples[start + j];
      ConfidenceRow& r = rows[start + j];
      r.id = s.id;
      r.pred = decode_orientation(f.p_hat.col(j));
      r.gt = s.gt_orientation;
      r.confidence = static_cast<double>(f.conf(j));
      r.max_prob = max_prob_score(f.p_hat.col(j));
      r.is_reliable = reliable(r.pred, r.gt);
    }
  }
  return rows;
}

std::vector<ScoredPrediction> scores_from(const std::vector<ConfidenceRow>& rows,
                                          bool use_confidence) {
  std::vector<ScoredPrediction> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    out.push_back({use_confidence ? r.confidence : r.max_prob, r.is_reliable});
  }
  return out;
}

void write_pr_csv(const std::string& path, const std::vector<PRPoint>& curve) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "threshold,precision,recall\n";
  for (const auto& pt : curve) {
    out << fmt_g9(pt.threshold) << ',' << fmt_g9(pt.precision) << ','
        << fmt_g9(pt.recall) << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

void write_pr_summary(const std::string& path, double max_recall,
                      std::int64_t n, const std::string& score_kind) {
  nlohmann::ordered_json j{{"max_recall_at_p100", max_recall},
                           {"n", n},
                           {"score_kind", score_kind}};
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << j.dump() << '\n';
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace horient
