// End-to-end acceptance checks. Each check prints one PASS/FAIL line with
// the measured values; the process exits nonzero if any check fails.
//
// Checks that need a trained model train it here, from datasets generated
// into a scratch directory, so a run is self-contained and deterministic.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <string>
#include <utility>
#include <vector>

#include "horient/checkpoint.hpp"
#include "horient/circular.hpp"
#include "horient/dataset.hpp"
#include "horient/evalreport.hpp"
#include "horient/gate.hpp"
#include "horient/model.hpp"
#include "horient/rng.hpp"
#include "horient/sim.hpp"
#include "horient/skeleton.hpp"
#include "horient/train.hpp"

namespace fs = std::filesystem;
using namespace horient;

namespace {

struct Clock {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

struct Result {
  bool pass = false;
  std::string detail;
};

fs::path g_work;
std::string g_cli;

// models shared across checks: trained once, reused where the recipe matches
AnyParams g_full_model;           // 20k full-view samples, default config
ModelParams<double> g_mixed_m23;  // mixed-visibility data, all 23 joints

Dataset make_dataset(const std::string& name, std::int64_t n,
                     const std::vector<ModeWeight>& mix, double sigma,
                     std::uint64_t seed) {
  const std::string path = (g_work / name).string();
  gen_dataset(path, n, mix, sigma, seed);
  return load_dataset(path);
}

// ---------------------------------------------------------------- check 1

Result check_circular() {
  Clock clk;
  Rng rng(2025, "acceptance-circular");
  int n = 0;
  bool ok = true;
  for (int k = 0; k < 1000 && ok; ++k) {
    const int l = static_cast<int>(rng.uniform_int(kNumBins));
    const double sigma = rng.uniform(0.3, 9.0);
    const int r = static_cast<int>(rng.uniform_int(kNumBins));
    const Distd p = circular_gaussian(l, sigma);
    ok = ok && std::abs(p.sum() - 1.0) <= 1e-9;
    ok = ok && decode_orientation(p) == bin_to_deg(l);
    const Distd q = circular_gaussian((l + r) % kNumBins, sigma);
    for (int i = 0; i < kNumBins && ok; ++i) {
      ok = q[(i + r) % kNumBins] == p[i];  // rotation must be a permutation
    }
    ++n;
  }
  const double s = clk.seconds();
  return {ok && s < 1.0,
          fmt("(%d draws: sum/argmax/rotation, %.2f s)", n, s)};
}

// ---------------------------------------------------------------- check 2

Result check_gradients() {
  Clock clk;
  ModelConfig cfg;
  cfg.joints = 5;
  cfg.hidden = {6, 5};
  cfg.heatmap_w = 3;
  cfg.heatmap_h = 3;

  Rng meta(7, "acceptance-grad");
  int triples_ok = 0;
  int params_checked = 0;
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    auto params = ModelParams<double>::init(cfg, 1000 + k);
    const double lambda = meta.uniform(0.02, 1.0);
    const OrientationDeg theta(meta.uniform(0.0, 360.0));
    const OcclusionMode mode =
        k % 3 == 0 ? OcclusionMode::lower_only()
                   : (k % 3 == 1 ? OcclusionMode::full()
                                 : OcclusionMode::random_drop(0.3));
    const Sample sample = synthesize(theta, mode, 0.05, meta.bits(), k);
    MatX<double> input =
        input_from_skeleton<double>(sample.skeleton, cfg.joints);
    MatX<double> target_p =
        circular_gaussian(deg_to_bin(theta), meta.uniform(1.0, 4.0));
    MatX<double> target_h(cfg.heatmap_size(), 1);
    for (Eigen::Index i = 0; i < target_h.size(); ++i) {
      target_h.data()[i] = meta.uniform01();
    }

    auto grads = params.zeros_like();
    {
      auto f = forward_batch(params, input);
      backward_batch(params, f, target_p, target_h, lambda, grads);
    }
    auto loss_at = [&]() {
      auto f = forward_batch(params, input);
      return batch_loss(f, target_p, target_h, lambda).total;
    };

    const double h = 1e-5;
    bool ok = true;
    std::vector<std::pair<double*, Eigen::Index>> pv, gv;
    params.for_each_layer([&pv](const std::string&, Dense<double>& d) {
      pv.emplace_back(d.w.data(), d.w.size());
      pv.emplace_back(d.b.data(), d.b.size());
    });
    grads.for_each_layer([&gv](const std::string&, Dense<double>& d) {
      gv.emplace_back(d.w.data(), d.w.size());
      gv.emplace_back(d.b.data(), d.b.size());
    });
    for (std::size_t t = 0; t < pv.size() && ok; ++t) {
      for (Eigen::Index i = 0; i < pv[t].second && ok; ++i) {
        double& param = pv[t].first[i];
        const double orig = param;
        param = orig + h;
        const double lp = loss_at();
        param = orig - h;
        const double lm = loss_at();
        param = orig;
        const double numeric = (lp - lm) / (2.0 * h);
        const double analytic = gv[t].first[i];
        const double scale = std::max(std::abs(numeric), std::abs(analytic));
        const double err = std::abs(numeric - analytic);
        if (scale > 1e-6) worst = std::max(worst, err / scale);
        ok = err < 1e-6 + 1e-4 * scale;
        ++params_checked;
      }
    }
    if (ok) ++triples_ok;
  }
  const double s = clk.seconds();
  return {triples_ok == 50 && s < 30.0,
          fmt("(%d/50 triples, %d params, worst rel %.2e, %.1f s)", triples_ok,
              params_checked, worst, s)};
}

// ---------------------------------------------------------------- check 3

Result check_training_sanity() {
  Dataset train_ds = make_dataset("c3_train.jsonl", 20000,
                                  {{OcclusionMode::full(), 1.0}}, 0.02, 101);
  Dataset test_ds = make_dataset("c3_test.jsonl", 2000,
                                 {{OcclusionMode::full(), 1.0}}, 0.02, 102);
  TrainConfig tc;
  tc.seed = 7;
  Clock clk;
  TrainOutput out = train(train_ds, tc);
  const double train_s = clk.seconds();
  g_full_model = out.params;

  ModelParams<double> m = as_f64(out.params);
  EvalSummary ev = evaluate(&m, EstimatorKind::kModel, test_ds, 0);
  return {ev.acc30 >= 0.90 && ev.mae <= 15.0 && train_s < 300.0,
          fmt("(acc30=%.3f >=0.90, mae=%.2f deg <=15, train %.0f s <300)",
              ev.acc30, ev.mae, train_s)};
}

// ---------------------------------------------------------------- check 4

Result check_foot_joints() {
  const std::vector<ModeWeight> half_half = {
      {OcclusionMode::full(), 0.5}, {OcclusionMode::lower_only(), 0.5}};
  Dataset mixed_train =
      make_dataset("c4_train.jsonl", 8000, half_half, 0.08, 103);
  Dataset lower_test = make_dataset(
      "c4_test.jsonl", 2000, {{OcclusionMode::lower_only(), 1.0}}, 0.08, 104);

  TrainConfig tc;
  tc.seed = 12;
  TrainOutput full_joints = train(mixed_train, tc);
  TrainConfig tc17 = tc;
  tc17.joints = kNumBodyJoints;
  TrainOutput body_joints = train(mixed_train, tc17);

  g_mixed_m23 = as_f64(full_joints.params);
  ModelParams<double> m17 = as_f64(body_joints.params);
  const double mae23 =
      evaluate(&g_mixed_m23, EstimatorKind::kModel, lower_test, 0).mae;
  const double mae17 = evaluate(&m17, EstimatorKind::kModel, lower_test, 0).mae;
  return {mae23 <= mae17,
          fmt("(lower-view mae: 23 joints %.2f deg <= 17 joints %.2f deg)",
              mae23, mae17)};
}

// ---------------------------------------------------------------- check 5

// Mean confidence must split the two visibility regimes. This uses its own
// training recipe: a full-view-heavy mix and sharper bin targets widen the
// error gap between regimes enough for the confidence head to encode it.
Result check_conf_separation() {
  Dataset sep_train = make_dataset("c5_train.jsonl", 8000,
                                   {{OcclusionMode::full(), 0.75},
                                    {OcclusionMode::lower_only(), 0.25}},
                                   0.05, 103);
  Dataset full_1k = make_dataset("c5_full.jsonl", 1000,
                                 {{OcclusionMode::full(), 1.0}}, 0.05, 105);
  Dataset lower_1k = make_dataset(
      "c5_lower.jsonl", 1000, {{OcclusionMode::lower_only(), 1.0}}, 0.05, 106);
  TrainConfig tc;
  tc.sigma_bins = 1.5;
  tc.seed = 16;
  ModelParams<double> m = as_f64(train(sep_train, tc).params);
  auto mean_conf = [&m](const Dataset& ds) {
    double sum = 0.0;
    for (const auto& s : ds.samples) sum += predict(m, s.skeleton).confidence;
    return sum / static_cast<double>(ds.samples.size());
  };
  const double cf = mean_conf(full_1k);
  const double cl = mean_conf(lower_1k);
  return {cf - cl >= 0.1,
          fmt("(mean conf full %.3f - lower %.3f = %.3f >= 0.1)", cf, cl,
              cf - cl)};
}

// ---------------------------------------------------------------- check 6

Result check_conf_gating() {
  Dataset mixed_test = make_dataset("c6_test.jsonl", 2000,
                                    {{OcclusionMode::full(), 0.5},
                                     {OcclusionMode::lower_only(), 0.5}},
                                    0.08, 107);
  auto rows = confidence_rows(g_mixed_m23, mixed_test);
  auto conf_curve = pr_curve(scores_from(rows, true));
  auto prob_curve = pr_curve(scores_from(rows, false));
  const double mr_conf = max_recall_at_full_precision(conf_curve);
  const double mr_prob = max_recall_at_full_precision(prob_curve);
  return {mr_conf > mr_prob,
          fmt("(max recall at full precision: conf %.4f > max-prob %.4f)",
              mr_conf, mr_prob)};
}

// ---------------------------------------------------------------- check 7

Result check_pr_bruteforce() {
  Clock clk;
  Rng rng(31, "acceptance-pr");
  int cases_ok = 0;
  for (int k = 0; k < 200; ++k) {
    const int n = 1 + static_cast<int>(rng.uniform_int(12));
    std::vector<ScoredPrediction> preds(n);
    for (auto& p : preds) {
      // scores on a coarse grid so ties are common
      p.score = 0.1 * static_cast<double>(rng.uniform_int(10));
      p.reliable = rng.uniform_int(2) == 1;
    }

    std::vector<double> thresholds;
    for (const auto& p : preds) thresholds.push_back(p.score);
    std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                     thresholds.end());
    int total_rel = 0;
    for (const auto& p : preds) total_rel += p.reliable ? 1 : 0;

    std::vector<PRPoint> expect;
    double expect_mr = 0.0;
    for (double th : thresholds) {
      int tp = 0, fp = 0;
      for (const auto& p : preds) {
        if (p.score >= th) (p.reliable ? tp : fp) += 1;
      }
      PRPoint pt;
      pt.threshold = th;
      pt.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
      pt.recall = total_rel > 0
                      ? static_cast<double>(tp) / static_cast<double>(total_rel)
                      : 0.0;
      expect.push_back(pt);
      if (pt.precision == 1.0) expect_mr = std::max(expect_mr, pt.recall);
    }

    auto curve = pr_curve(preds);
    bool ok = curve.size() == expect.size();
    for (std::size_t i = 0; ok && i < curve.size(); ++i) {
      ok = curve[i].threshold == expect[i].threshold &&
           curve[i].precision == expect[i].precision &&
           curve[i].recall == expect[i].recall;
    }
    ok = ok && max_recall_at_full_precision(curve) == expect_mr;
    if (ok) ++cases_ok;
  }
  const double s = clk.seconds();
  return {cases_ok == 200 && s < 10.0,
          fmt("(%d/200 cases exact, %.2f s)", cases_ok, s)};
}

// ---------------------------------------------------------------- check 8

Scenario walk_scenario(double pos_sigma, double skel_sigma) {
  Scenario sc;
  sc.name = "straight-walk";
  sc.duration_s = 10.0;
  SegmentSpec walk;
  walk.kind = SegmentSpec::Kind::kWalk;
  walk.speed_mps = 1.0;
  walk.heading_deg = 0.0;
  walk.duration_s = 10.0;
  sc.segments = {walk};
  sc.noise = {pos_sigma, skel_sigma};
  sc.seed = 42;
  return sc;
}

Scenario spin_scenario(double pos_sigma, double skel_sigma) {
  Scenario sc;
  sc.name = "spin-in-place";
  sc.duration_s = 16.0;
  SegmentSpec walk;
  walk.kind = SegmentSpec::Kind::kWalk;
  walk.speed_mps = 1.0;
  walk.heading_deg = 0.0;
  walk.duration_s = 4.0;
  SegmentSpec spin;
  spin.kind = SegmentSpec::Kind::kSpin;
  spin.rate_dps = 60.0;
  spin.duration_s = 1.5;
  SegmentSpec pause;
  pause.kind = SegmentSpec::Kind::kPause;
  pause.duration_s = 10.5;
  sc.segments = {walk, spin, pause};
  sc.noise = {pos_sigma, skel_sigma};
  sc.seed = 42;
  return sc;
}

Result check_goal_geometry() {
  Rng rng(77, "acceptance-goals");
  bool ok = true;
  int n = 0;
  for (int k = 0; k < 10000 && ok; ++k) {
    PersonState p;
    p.x = rng.uniform(-50.0, 50.0);
    p.y = rng.uniform(-50.0, 50.0);
    p.theta = OrientationDeg(rng.uniform(0.0, 360.0));
    const double d = rng.uniform(0.2, 3.0);

    const GoalPose b = backward_goal(p, d);
    ok = ok && std::abs(std::hypot(b.x - p.x, b.y - p.y) - d) < 1e-9;
    ok = ok && b.theta == p.theta;
    // the person must sit dead ahead of a backward goal
    const OrientationDeg to_person(rad2deg(std::atan2(p.y - b.y, p.x - b.x)));
    ok = ok && circ_diff(to_person, p.theta) < 1e-7;

    const GoalPose f = forward_goal(p, d);
    ok = ok && std::abs(std::hypot(f.x - p.x, f.y - p.y) - d) < 1e-9;
    ok = ok && std::abs(circ_diff(f.theta, p.theta) - 180.0) < 1e-9;
    const OrientationDeg to_goal(rad2deg(std::atan2(f.y - p.y, f.x - p.x)));
    ok = ok && circ_diff(to_goal, p.theta) < 1e-7;

    const GoalPose gb = goal_for(FollowTask::kBackward, p, d);
    ok = ok && gb.x == b.x && gb.y == b.y && gb.theta == b.theta;
    ++n;
  }

  const Scenario sc = walk_scenario(0.0, 0.0);
  SimResult res = run_scenario(sc, SimEstimator::kGroundTruth, nullptr, {});
  const double settled = trajectory_ate(res, 2.0);
  return {ok && settled < 0.05,
          fmt("(%d states exact, walk ate after 2 s %.4f m < 0.05)", n,
              settled)};
}

// ---------------------------------------------------------------- check 9

Result check_spin_failure() {
  ModelParams<double> m = as_f64(g_full_model);
  SimConfig cfg;

  const Scenario spin = spin_scenario(0.01, 0.01);
  const double spin_cv =
      run_scenario(spin, SimEstimator::kCv, nullptr, cfg).ate_m;
  const double spin_model =
      run_scenario(spin, SimEstimator::kModel, &m, cfg).ate_m;
  const double spin_gt =
      run_scenario(spin, SimEstimator::kGroundTruth, nullptr, cfg).ate_m;

  const Scenario walk = walk_scenario(0.01, 0.01);
  const double walk_cv =
      run_scenario(walk, SimEstimator::kCv, nullptr, cfg).ate_m;
  const double walk_model =
      run_scenario(walk, SimEstimator::kModel, &m, cfg).ate_m;

  const double walk_ratio =
      std::max(walk_cv, walk_model) / std::min(walk_cv, walk_model);
  const bool ok = spin_cv >= 2.0 * spin_model && spin_cv >= 2.0 * spin_gt &&
                  walk_ratio <= 2.0;
  return {ok,
          fmt("(spin ate: cv %.3f >= 2x model %.3f and 2x gt %.3f; "
              "walk cv %.3f vs model %.3f, ratio %.2f <= 2)",
              spin_cv, spin_model, spin_gt, walk_cv, walk_model, walk_ratio)};
}

// --------------------------------------------------------------- check 10

Result check_temporal_gate() {
  Rng rng(99, "acceptance-gate");
  TemporalGate gate(5);
  const double rate_dps = 45.0;
  const double frame_dt = 1.0 / 25.0;
  double gated_sum = 0.0;
  double raw_sum = 0.0;
  int n = 0;
  int injected = 0;
  for (int k = 0; k < 1000; ++k) {
    const OrientationDeg truth(rate_dps * frame_dt * k);
    OrientationDeg est;
    double conf = 0.0;
    if (rng.uniform01() < 0.2) {  // corrupted frame, flagged by low confidence
      est = OrientationDeg(truth.deg() +
                           (rng.uniform_int(2) == 0 ? 90.0 : -90.0));
      conf = 0.05 + 0.1 * rng.uniform01();
      ++injected;
    } else {
      est = OrientationDeg(truth.deg() + rng.normal(0.0, 3.0));
      conf = 0.6 + 0.35 * rng.uniform01();
    }
    gate.push(est, conf);
    gated_sum += circ_diff(gate.current(), truth);
    raw_sum += circ_diff(est, truth);
    ++n;
  }
  const double gated = gated_sum / n;
  const double raw = raw_sum / n;
  return {gated < raw,
          fmt("(%d frames, %d corrupted: gated mae %.2f deg < raw %.2f deg)",
              n, injected, gated, raw)};
}

// --------------------------------------------------------------- check 11

bool run_stage(const fs::path& dir, const std::string& args) {
  const std::string cmd = "cd \"" + dir.string() + "\" && \"" + g_cli + "\" " +
                          args + " >> stage.log 2>&1";
  return std::system(cmd.c_str()) == 0;
}

bool run_pipeline(const fs::path& dir) {
  fs::create_directories(dir);
  {
    std::ofstream scen(dir / "scen.json", std::ios::binary);
    scen << R"({
  "name": "rerun-check",
  "duration_s": 6.0,
  "seed": 42,
  "segments": [
    {"kind": "walk", "speed_mps": 1.0, "heading_deg": 0.0, "duration_s": 3.0},
    {"kind": "spin", "rate_dps": 90.0, "duration_s": 1.0},
    {"kind": "pause", "duration_s": 2.0}
  ],
  "noise": {"position_sigma_m": 0.01, "skeleton_sigma": 0.01}
})" << "\n";
  }
  return run_stage(dir,
                   "gen-data --n 300 --mix full:0.5,lower:0.5 --noise-sigma "
                   "0.05 --seed 5 --out data.jsonl") &&
         run_stage(dir,
                   "train --data data.jsonl --out tr --epochs 3 --hidden "
                   "32,32 --seed 9") &&
         run_stage(dir,
                   "eval --checkpoint tr/checkpoint.json --data data.jsonl "
                   "--estimator model --out ev") &&
         run_stage(dir,
                   "eval-confidence --checkpoint tr/checkpoint.json --data "
                   "data.jsonl --out ec") &&
         run_stage(dir,
                   "simulate --scenario scen.json --checkpoint "
                   "tr/checkpoint.json --estimator "
                   "cv_baseline,model,ground_truth --task backward,forward "
                   "--out sim");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

int count_files(const fs::path& root) {
  int n = 0;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) ++n;
  }
  return n;
}

Result check_rerun_determinism() {
  if (g_cli.empty()) {
    return {false, "(no cli path given on the command line)"};
  }
  const fs::path run1 = g_work / "rerun1";
  const fs::path run2 = g_work / "rerun2";
  if (!run_pipeline(run1) || !run_pipeline(run2)) {
    return {false, "(a pipeline stage exited nonzero, see stage.log)"};
  }
  int files = 0;
  int mismatched = 0;
  std::string first_bad;
  for (const auto& entry : fs::recursive_directory_iterator(run1)) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), run1);
    ++files;
    if (!fs::exists(run2 / rel) || slurp(entry.path()) != slurp(run2 / rel)) {
      ++mismatched;
      if (first_bad.empty()) first_bad = rel.string();
    }
  }
  const bool ok =
      files > 0 && mismatched == 0 && count_files(run2) == files;
  return {ok, ok ? fmt("(%d artifacts compared across two runs)", files)
                 : fmt("(%d of %d artifacts differ, first: %s)", mismatched,
                       files, first_bad.c_str())};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_cli = argv[1];
  g_work = fs::current_path() / "acceptance_work";
  std::error_code ec;
  fs::remove_all(g_work, ec);
  fs::create_directories(g_work);

  struct Check {
    const char* name;
    Result (*fn)();
  };
  const Check checks[] = {
      {"circular target properties", check_circular},
      {"analytic gradients vs finite differences", check_gradients},
      {"training sanity on full-view data", check_training_sanity},
      {"foot joints help under lower-body views", check_foot_joints},
      {"confidence separates full from partial views", check_conf_separation},
      {"confidence gating beats max-prob gating", check_conf_gating},
      {"pr curve matches brute-force enumeration", check_pr_bruteforce},
      {"goal geometry and ground-truth following", check_goal_geometry},
      {"bearing baseline fails on spin, model does not", check_spin_failure},
      {"temporal gate filters low-confidence errors", check_temporal_gate},
      {"pipeline reruns are byte-identical", check_rerun_determinism},
  };

  Clock total;
  int failures = 0;
  int idx = 0;
  for (const Check& c : checks) {
    Result r;
    try {
      r = c.fn();
    } catch (const std::exception& e) {
      r = {false, fmt("(exception: %s)", e.what())};
    }
    if (!r.pass) ++failures;
    std::printf("[%2d/11] %-48s %s  %s\n", ++idx, c.name,
                r.pass ? "PASS" : "FAIL", r.detail.c_str());
    std::fflush(stdout);
  }

  std::printf("%s: %d/11 checks passed (%.0f s)\n",
              failures == 0 ? "OK" : "FAILED", 11 - failures, total.seconds());
  return failures == 0 ? 0 : 1;
}
