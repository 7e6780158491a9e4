#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>

#include "horient/evalreport.hpp"

using namespace horient;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int c = 0;
    path = fs::temp_directory_path() /
           ("horient_eval_" + std::to_string(::getpid()) + "_" +
            std::to_string(c++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const char* name) const { return (path / name).string(); }
};

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Dataset small_data(const TempDir& tmp, int n = 200) {
  auto path = tmp / "d.jsonl";
  gen_dataset(path, n, {{OcclusionMode::full(), 1.0}}, 0.01, 42);
  return load_dataset(path);
}

ModelParams<double> untrained_model() {
  ModelConfig cfg;
  cfg.hidden = {16};
  cfg.heatmap_w = 4;
  cfg.heatmap_h = 4;
  return ModelParams<double>::init(cfg, 5);
}

}  // namespace

TEST_CASE("estimator names parse strictly") {
  CHECK(parse_estimator("model") == EstimatorKind::kModel);
  CHECK(parse_estimator("gt-echo") == EstimatorKind::kGtEcho);
  CHECK(parse_estimator("uniform-random") == EstimatorKind::kUniformRandom);
  CHECK_THROWS_AS(parse_estimator("oracle"), ConfigError);
}

TEST_CASE("the ground-truth echo is perfect by construction") {
  TempDir tmp;
  Dataset d = small_data(tmp);
  EvalSummary s = evaluate(nullptr, EstimatorKind::kGtEcho, d, 0);
  CHECK(s.n == 200);
  CHECK(s.acc30 == 1.0);
  CHECK(s.mae == 0.0);
}

TEST_CASE("uniform random guessing sits near its closed-form rates") {
  TempDir tmp;
  Dataset d = small_data(tmp, 4000);
  EvalSummary s = evaluate(nullptr, EstimatorKind::kUniformRandom, d, 1);
  // P(within 30) = 1/6, E|err| = 90
  CHECK(s.acc30 == doctest::Approx(1.0 / 6.0).epsilon(0.15));
  CHECK(s.mae == doctest::Approx(90.0).epsilon(0.05));

  // seeded: same seed same numbers, different seed different numbers
  EvalSummary s2 = evaluate(nullptr, EstimatorKind::kUniformRandom, d, 1);
  CHECK(s.acc30 == s2.acc30);
  EvalSummary s3 = evaluate(nullptr, EstimatorKind::kUniformRandom, d, 2);
  CHECK(s.acc30 != s3.acc30);
}

TEST_CASE("the model estimator needs a model") {
  TempDir tmp;
  Dataset d = small_data(tmp);
  CHECK_THROWS_AS(evaluate(nullptr, EstimatorKind::kModel, d, 0),
                  InvalidInputError);
  auto m = untrained_model();
  EvalSummary s = evaluate(&m, EstimatorKind::kModel, d, 0);
  CHECK(s.n == 200);
  CHECK(s.acc30 >= 0.0);
  CHECK(s.acc30 <= 1.0);
  CHECK(s.mae >= 0.0);
  CHECK(s.mae <= 180.0);
}

TEST_CASE("confidence rows carry consistent per-sample facts") {
  TempDir tmp;
  Dataset d = small_data(tmp);
  auto m = untrained_model();
  auto rows = confidence_rows(m, d);
  REQUIRE(rows.size() == d.samples.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    CHECK(r.id == d.samples[i].id);
    CHECK(r.gt == d.samples[i].gt_orientation);
    CHECK(r.confidence > 0.0);
    CHECK(r.confidence < 1.0);
    CHECK(r.max_prob >= 1.0 / 72.0);
    CHECK(r.max_prob <= 1.0);
    CHECK(r.is_reliable == (circ_diff(r.pred, r.gt) <= 20.0));
  }

  // per-sample prediction must agree with the batched pass
  auto p0 = predict(m, d.samples[0].skeleton);
  CHECK(rows[0].pred == p0.orientation);
  CHECK(rows[0].confidence == doctest::Approx(p0.confidence).epsilon(1e-12));

  auto conf_scores = scores_from(rows, true);
  auto prob_scores = scores_from(rows, false);
  CHECK(conf_scores.size() == rows.size());
  CHECK(conf_scores[0].score == rows[0].confidence);
  CHECK(prob_scores[0].score == rows[0].max_prob);
  CHECK(conf_scores[0].reliable == rows[0].is_reliable);
}

TEST_CASE("pr artifacts are deterministic and well formed") {
  TempDir tmp;
  std::vector<PRPoint> curve = {{0.9, 1.0, 1.0 / 3.0}, {0.6, 0.75, 1.0}};
  auto a = tmp / "pr_a.csv";
  auto b = tmp / "pr_b.csv";
  write_pr_csv(a, curve);
  write_pr_csv(b, curve);
  CHECK(slurp(a) == slurp(b));
  std::ifstream in(a);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "threshold,precision,recall");
  REQUIRE(std::getline(in, line));
  CHECK(line == "0.9,1,0.333333333");

  auto s = tmp / "summary.json";
  write_pr_summary(s, 1.0 / 3.0, 4, "confidence");
  CHECK(slurp(s) ==
        "{\"max_recall_at_p100\":0.3333333333333333,\"n\":4,"
        "\"score_kind\":\"confidence\"}\n");

  CHECK_THROWS_AS(write_pr_csv(tmp / "nodir/x.csv", curve), IoError);
}

TEST_CASE("mode table splits a mixed dataset per occlusion mode") {
  TempDir tmp;
  auto path = tmp / "mix.jsonl";
  gen_dataset(path, 300,
              {{OcclusionMode::full(), 0.5}, {OcclusionMode::lower_only(), 0.5}},
              0.01, 9);
  Dataset d = load_dataset(path);

  auto rows = mode_reports(nullptr, EstimatorKind::kGtEcho, d, 0);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].mode == "all");
  CHECK(rows[0].n == 300);
  // mode rows partition the total
  CHECK(rows[1].n + rows[2].n == 300);
  CHECK(rows[1].mode != rows[2].mode);
  for (const auto& r : rows) {
    CHECK(r.acc5 == doctest::Approx(1.0));
    CHECK(r.acc15 == doctest::Approx(1.0));
    CHECK(r.acc30 == doctest::Approx(1.0));
    CHECK(r.mae == doctest::Approx(0.0));
  }

  // accuracies are nested: acc5 <= acc15 <= acc30 for a real estimator
  auto rnd = mode_reports(nullptr, EstimatorKind::kUniformRandom, d, 3);
  for (const auto& r : rnd) {
    CHECK(r.acc5 <= r.acc15);
    CHECK(r.acc15 <= r.acc30);
  }
  // the all row aggregates the mode rows exactly
  CHECK(rnd[0].n * rnd[0].acc30 ==
        doctest::Approx(rnd[1].n * rnd[1].acc30 + rnd[2].n * rnd[2].acc30));
}

TEST_CASE("eval table artifacts are deterministic and well formed") {
  TempDir tmp;
  Dataset d = small_data(tmp, 50);
  auto rows = mode_reports(nullptr, EstimatorKind::kUniformRandom, d, 1);

  auto a = tmp / "eval_a.csv";
  auto b = tmp / "eval_b.csv";
  write_eval_csv(a, rows);
  write_eval_csv(b, rows);
  std::string sa = slurp(a);
  CHECK(sa == slurp(b));
  CHECK(sa.rfind("mode,n,acc5,acc15,acc30,mae\n", 0) == 0);
  CHECK(std::count(sa.begin(), sa.end(), '\n') == 3);  // header + all + full

  std::string table = format_eval_table(rows);
  CHECK(table.find("mode") == 0);
  CHECK(table.find("all") != std::string::npos);
  CHECK(table.find("full") != std::string::npos);

  CHECK_THROWS_AS(write_eval_csv(tmp / "nodir/x.csv", rows), IoError);
}
