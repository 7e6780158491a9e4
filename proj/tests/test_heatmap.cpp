#include <doctest.h>

#include <cmath>

#include "horient/heatmap.hpp"
#include "horient/skeleton.hpp"

using namespace horient;

namespace {

Skeleton23 one_joint_at(double x, double y) {
  Skeleton23 s;
  s.joints[0] = {x, y, true};
  return s;
}

}  // namespace

TEST_CASE("a joint at the box center peaks at exactly one on the grid") {
  auto h = make_heatmaps<double>(one_joint_at(0.5, 0.5), 16, 16, 2.0);
  CHECK(h.at(0, 8, 8) == 1.0);
}

// frozen spot values for joint (0.25, 0.5) on a 16x16 grid, sigma 2:
// center lands on pixel (4, 8)
TEST_CASE("heatmap values match the frozen reference spots") {
  auto h = make_heatmaps<double>(one_joint_at(0.25, 0.5), 16, 16, 2.0);
  CHECK(h.at(0, 4, 8) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(h.at(0, 0, 0) == doctest::Approx(4.5399929762484854e-05).epsilon(1e-12));
  CHECK(h.at(0, 6, 8) == doctest::Approx(0.6065306597126334).epsilon(1e-12));
  CHECK(h.at(0, 4, 10) == doctest::Approx(0.6065306597126334).epsilon(1e-12));
  CHECK(h.at(0, 15, 15) == doctest::Approx(5.905303998944039e-10).epsilon(1e-12));
}

TEST_CASE("hidden joints produce all-zero maps") {
  Skeleton23 s;
  s.joints[3] = {0.5, 0.5, true};
  auto h = make_heatmaps<double>(s, 8, 8, 1.5);
  REQUIRE(h.data.size() == 23 * 64);
  for (int j = 0; j < kNumJoints; ++j) {
    double mx = h.data.segment(j * 64, 64).maxCoeff();
    if (j == 3) {
      CHECK(mx == 1.0);
    } else {
      CHECK(mx == 0.0);
    }
  }
}

TEST_CASE("flattening is joint-major then row-major in y") {
  auto h = make_heatmaps<double>(one_joint_at(0.25, 0.5), 4, 4, 1.0);
  // at(j, px, py) must agree with manual flat indexing
  for (int py = 0; py < 4; ++py) {
    for (int px = 0; px < 4; ++px) {
      CHECK(h.at(0, px, py) == h.data[py * 4 + px]);
    }
  }
}

TEST_CASE("rectangular grids keep their axes straight") {
  // width 8, height 4; joint at (0.25, 0.5) -> pixel (2, 2)
  auto h = make_heatmaps<double>(one_joint_at(0.25, 0.5), 8, 4, 1.0);
  CHECK(h.at(0, 2, 2) == 1.0);
  // one pixel right vs one pixel down decay identically
  CHECK(h.at(0, 3, 2) == doctest::Approx(h.at(0, 2, 3)));
  // interior maximum sits at (2, 2)
  for (int py = 0; py < 4; ++py) {
    for (int px = 0; px < 8; ++px) {
      if (px != 2 || py != 2) CHECK(h.at(0, px, py) < 1.0);
    }
  }
}

TEST_CASE("the bump is separable") {
  auto h = make_heatmaps<double>(one_joint_at(0.3, 0.7), 16, 16, 1.5);
  // value(px, py) * value(cx_pixelish...) - use ratios: v(a,b)*v(c,d) ==
  // v(a,d)*v(c,b) for a separable function
  CHECK(h.at(0, 2, 3) * h.at(0, 9, 12) ==
        doctest::Approx(h.at(0, 2, 12) * h.at(0, 9, 3)).epsilon(1e-12));
}

TEST_CASE("float and double targets agree to float precision") {
  Skeleton23 s;
  for (int j = 0; j < kNumJoints; ++j) {
    s.joints[j] = {0.1 + 0.035 * j, 0.9 - 0.03 * j, true};
  }
  auto hd = make_heatmaps<double>(s, 16, 16, 1.5);
  auto hf = make_heatmaps<float>(s, 16, 16, 1.5f);
  REQUIRE(hd.data.size() == hf.data.size());
  for (Eigen::Index i = 0; i < hd.data.size(); ++i) {
    CHECK(std::abs(hd.data[i] - static_cast<double>(hf.data[i])) < 1e-5);
  }
}

TEST_CASE("truncated joint counts only write the leading maps") {
  Skeleton23 s;
  for (int j = 0; j < kNumJoints; ++j) s.joints[j] = {0.5, 0.5, true};
  auto h = make_heatmaps<double>(s, 4, 4, 1.0, 17);
  CHECK(h.joints == 17);
  CHECK(h.data.size() == 17 * 16);
}

TEST_CASE("bad heatmap arguments are rejected") {
  Skeleton23 s;
  CHECK_THROWS_AS(make_heatmaps<double>(s, 0, 16, 2.0), InvalidInputError);
  CHECK_THROWS_AS(make_heatmaps<double>(s, 16, 16, 0.0), InvalidInputError);
  CHECK_THROWS_AS(make_heatmaps<double>(s, 16, 16, 2.0, 24), InvalidInputError);
}
