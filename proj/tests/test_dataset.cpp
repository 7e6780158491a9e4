#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include "horient/dataset.hpp"
#include "horient/errors.hpp"

using namespace horient;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("horient_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const char* name) const { return (path / name).string(); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("generated datasets load back intact") {
  TempDir tmp;
  auto path = tmp / "train.jsonl";
  std::vector<ModeWeight> mix = {{OcclusionMode::full(), 1.0},
                                 {OcclusionMode::lower_only(), 1.0}};
  gen_dataset(path, 200, mix, 0.01, 7);

  Dataset d = load_dataset(path);
  CHECK(d.header.version == 1);
  CHECK(d.header.convention == "0deg-facing-camera-ccw");
  CHECK(d.header.noise_sigma == 0.01);
  CHECK(d.header.seed == 7);
  REQUIRE(d.samples.size() == 200);
  for (std::size_t i = 0; i < d.samples.size(); ++i) {
    CHECK(d.samples[i].id == static_cast<std::int64_t>(i));
    CHECK(d.samples[i].gt_orientation.deg() >= 0.0);
    CHECK(d.samples[i].gt_orientation.deg() < 360.0);
    CHECK(d.samples[i].skeleton.visible_count() >= 1);
  }
}

TEST_CASE("generation is byte-deterministic in the seed") {
  TempDir tmp;
  auto a = tmp / "a.jsonl";
  auto b = tmp / "b.jsonl";
  auto c = tmp / "c.jsonl";
  std::vector<ModeWeight> mix = {{OcclusionMode::full(), 3.0},
                                 {OcclusionMode::random_drop(0.25), 1.0}};
  gen_dataset(a, 100, mix, 0.02, 99);
  gen_dataset(b, 100, mix, 0.02, 99);
  gen_dataset(c, 100, mix, 0.02, 100);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(header_path(a)) == slurp(header_path(b)));
  CHECK(slurp(a) != slurp(c));
}

TEST_CASE("stored samples re-render bit-exactly from the header seed") {
  TempDir tmp;
  auto path = tmp / "d.jsonl";
  gen_dataset(path, 50, {{OcclusionMode::random_drop(0.4), 1.0}}, 0.015, 31);
  Dataset d = load_dataset(path);
  for (const auto& s : d.samples) {
    Sample again = synthesize(s.gt_orientation, s.mode, d.header.noise_sigma,
                              sample_seed(d.header.seed, s.id), s.id);
    for (int j = 0; j < kNumJoints; ++j) {
      CHECK(s.skeleton.joints[j].x == again.skeleton.joints[j].x);
      CHECK(s.skeleton.joints[j].y == again.skeleton.joints[j].y);
      CHECK(s.skeleton.joints[j].visible == again.skeleton.joints[j].visible);
    }
  }
}

TEST_CASE("mode mix respects the weights") {
  TempDir tmp;
  auto path = tmp / "mix.jsonl";
  std::vector<ModeWeight> mix = {{OcclusionMode::full(), 0.5},
                                 {OcclusionMode::lower_only(), 0.5}};
  gen_dataset(path, 2000, mix, 0.0, 12);
  Dataset d = load_dataset(path);
  std::map<std::string, int> counts;
  for (const auto& s : d.samples) counts[s.mode.str()]++;
  // 1000 expected each; 4-sigma band ~ +-90
  CHECK(counts["full"] > 880);
  CHECK(counts["full"] < 1120);
  CHECK(counts["full"] + counts["lower"] == 2000);
}

TEST_CASE("orientations cover the circle") {
  TempDir tmp;
  auto path = tmp / "u.jsonl";
  gen_dataset(path, 1440, {{OcclusionMode::full(), 1.0}}, 0.0, 5);
  Dataset d = load_dataset(path);
  int quadrants[4] = {0, 0, 0, 0};
  for (const auto& s : d.samples) {
    quadrants[static_cast<int>(s.gt_orientation.deg() / 90.0)]++;
  }
  for (int q = 0; q < 4; ++q) {
    CHECK(quadrants[q] > 280);  // 360 expected per quadrant
    CHECK(quadrants[q] < 440);
  }
}

TEST_CASE("bad generation arguments are rejected up front") {
  TempDir tmp;
  auto path = tmp / "x.jsonl";
  std::vector<ModeWeight> mix = {{OcclusionMode::full(), 1.0}};
  CHECK_THROWS_AS(gen_dataset(path, 0, mix, 0.0, 1), InvalidInputError);
  CHECK_THROWS_AS(gen_dataset(path, 10, {}, 0.0, 1), InvalidInputError);
  CHECK_THROWS_AS(gen_dataset(path, 10, {{OcclusionMode::full(), 0.0}}, 0.0, 1),
                  InvalidInputError);
  CHECK_THROWS_AS(gen_dataset(path, 10, mix, -1.0, 1), InvalidInputError);
  CHECK_THROWS_AS(gen_dataset(tmp / "no_dir/x.jsonl", 10, mix, 0.0, 1), IoError);
}

TEST_CASE("loading rejects missing or garbled files") {
  TempDir tmp;
  CHECK_THROWS_AS(load_dataset(tmp / "absent.jsonl"), IoError);

  auto path = tmp / "bad.jsonl";
  gen_dataset(path, 3, {{OcclusionMode::full(), 1.0}}, 0.0, 1);

  // corrupt one line
  {
    std::ofstream out(path, std::ios::app);
    out << "{not json\n";
  }
  CHECK_THROWS_AS(load_dataset(path), InvalidInputError);
}

TEST_CASE("loading rejects headers from a different world") {
  TempDir tmp;
  auto path = tmp / "v.jsonl";
  gen_dataset(path, 3, {{OcclusionMode::full(), 1.0}}, 0.0, 1);
  {
    std::ofstream h(header_path(path));
    h << R"({"version":2,"convention":"0deg-facing-camera-ccw","noise_sigma":0.0,"seed":1})"
      << "\n";
  }
  CHECK_THROWS_AS(load_dataset(path), InvalidInputError);
  {
    std::ofstream h(header_path(path));
    h << R"({"version":1,"convention":"compass-north","noise_sigma":0.0,"seed":1})"
      << "\n";
  }
  CHECK_THROWS_AS(load_dataset(path), InvalidInputError);
}
