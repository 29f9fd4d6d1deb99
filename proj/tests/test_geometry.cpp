#include <cmath>
#include <random>

#include "core/geometry.hpp"
#include "doctest.h"

using namespace ott;

namespace {

BoundingBox box(double x1, double y1, double x2, double y2) { return {x1, y1, x2, y2}; }

MotionField constant_flow(int w, int h, float dx, float dy) {
  MotionField f = MotionField::flow(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      f.at(x, y, 0) = dx;
      f.at(x, y, 1) = dy;
    }
  }
  return f;
}

BoundingBox random_box(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 80.0), s(1.0, 40.0);
  const double x = u(rng), y = u(rng);
  return {x, y, x + s(rng), y + s(rng)};
}

}  // namespace

TEST_CASE("iou on identical, disjoint, and partially overlapping boxes") {
  CHECK(iou(box(0, 0, 10, 10), box(0, 0, 10, 10)) == 1.0);
  CHECK(iou(box(0, 0, 10, 10), box(20, 20, 30, 30)) == 0.0);
  // inter = 50, union = 150
  CHECK(iou(box(0, 0, 10, 10), box(5, 0, 15, 10)) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("iou rejects degenerate boxes") {
  CHECK_THROWS_AS(iou(box(0, 0, 0, 10), box(0, 0, 1, 1)), Error);
}

TEST_CASE("iou is symmetric and translation invariant") {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 300; ++t) {
    const BoundingBox a = random_box(rng);
    const BoundingBox b = random_box(rng);
    CHECK(iou(a, b) == iou(b, a));
    std::uniform_real_distribution<double> shift(-50.0, 50.0);
    const double dx = shift(rng), dy = shift(rng);
    CHECK(std::abs(iou(a.translated(dx, dy), b.translated(dx, dy)) - iou(a, b)) <= 1e-12);
  }
}

TEST_CASE("warp_box translates by the flow sampled at the center") {
  const MotionField f = constant_flow(32, 32, 3.0f, -2.0f);
  CHECK(warp_box(box(0, 0, 10, 10), f) == box(3, -2, 13, 8));

  const MotionField zero = MotionField::flow(32, 32);
  CHECK(warp_box(box(0, 0, 10, 10), zero) == box(0, 0, 10, 10));
}

TEST_CASE("warp_box bilinearly interpolates a flow discontinuity") {
  // Flow steps from 0 to 8 between x=5 and x=6; the box center (5.5, 5.5)
  // sits exactly on the step, in the middle of a 4-pixel neighborhood whose
  // dx values are {0, 8, 0, 8} -> sample 4, and dy values {1, 1, 3, 3} -> 2.
  MotionField f = MotionField::flow(16, 16);
  for (int y = 0; y < 16; ++y) {
    for (int x = 0; x < 16; ++x) {
      f.at(x, y, 0) = x >= 6 ? 8.0f : 0.0f;
      f.at(x, y, 1) = y >= 6 ? 3.0f : 1.0f;
    }
  }
  const BoundingBox moved = warp_box(box(1, 1, 10, 10), f);
  CHECK(moved.x1 == doctest::Approx(1.0 + 4.0).epsilon(1e-12));
  CHECK(moved.y1 == doctest::Approx(1.0 + 2.0).epsilon(1e-12));
  CHECK(moved.width() == doctest::Approx(9.0));
  CHECK(moved.height() == doctest::Approx(9.0));
}

TEST_CASE("warp_box reads a 1-channel field as horizontal disparity") {
  MotionField d = MotionField::disparity(16, 16);
  for (float& v : d.values) v = 2.5f;
  CHECK(warp_box(box(2, 2, 8, 8), d) == box(2 - 2.5, 2, 8 - 2.5, 8));
}

TEST_CASE("warp_box fails when the center leaves the grid") {
  const MotionField f = MotionField::flow(8, 8);
  CHECK_THROWS_AS(warp_box(box(10, 10, 20, 20), f), Error);
  try {
    warp_box(box(10, 10, 20, 20), f);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CenterOutOfField);
  }
}

namespace {

Detection det(const BoundingBox& b, double conf) {
  Detection d;
  d.box = b;
  d.confidence = conf;
  return d;
}

}  // namespace

TEST_CASE("nms keeps the higher-confidence of two identical boxes") {
  const auto kept = nms({det(box(0, 0, 10, 10), 0.9), det(box(0, 0, 10, 10), 0.8)}, 0.3);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].confidence == 0.9);
}

TEST_CASE("nms keeps disjoint boxes") {
  const auto kept = nms({det(box(0, 0, 10, 10), 0.9), det(box(20, 0, 30, 10), 0.1)}, 0.3);
  CHECK(kept.size() == 2);
}

TEST_CASE("nms chain suppression keeps the first and third box") {
  // Pairwise IoU: (1,2) = 0.5, (2,3) = 0.5, (1,3) = 0. The middle box is
  // suppressed by the first; the third then survives.
  const BoundingBox b1 = box(0, 0, 12, 10);
  const BoundingBox b2 = box(4, 0, 16, 10);
  const BoundingBox b3 = box(8, 0, 20, 10);
  CHECK(iou(b1, b2) == doctest::Approx(0.5));
  CHECK(iou(b2, b3) == doctest::Approx(0.5));
  CHECK(iou(b1, b3) == doctest::Approx(1.0 / 5.0));  // boxes share a third
  // Use boxes with (1,3) fully disjoint to match the stated chain.
  const BoundingBox c1 = box(0, 0, 9, 10);
  const BoundingBox c2 = box(3, 0, 12, 10);
  const BoundingBox c3 = box(9.5, 0, 18.5, 10);
  CHECK(iou(c1, c2) == doctest::Approx(0.5));
  CHECK(iou(c2, c3) == doctest::Approx(2.5 / 15.5));
  CHECK(iou(c1, c3) == 0.0);
  const auto kept = nms({det(c1, 0.9), det(c2, 0.8), det(c3, 0.7)}, 0.15);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].box == c1);
  CHECK(kept[1].box == c3);
}

TEST_CASE("nms ties break toward the earlier input index") {
  const auto kept = nms({det(box(0, 0, 10, 10), 0.8), det(box(0, 0, 10, 10), 0.8)}, 0.3);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].box == box(0, 0, 10, 10));
}

TEST_CASE("nms output is a subset and every suppressed box overlaps a survivor") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> conf(0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    std::vector<Detection> dets;
    for (int i = 0; i < 20; ++i) dets.push_back(det(random_box(rng), conf(rng)));
    const auto kept = nms(dets, 0.4);
    CHECK(kept.size() <= dets.size());
    for (const Detection& d : dets) {
      const bool survived =
          std::any_of(kept.begin(), kept.end(), [&](const Detection& k) {
            return k.box == d.box && k.confidence == d.confidence;
          });
      if (survived) continue;
      const bool covered =
          std::any_of(kept.begin(), kept.end(), [&](const Detection& k) {
            return k.confidence >= d.confidence && iou(k.box, d.box) > 0.4;
          });
      CHECK(covered);
    }
  }
}

TEST_CASE("warp_grid identity and constant-shift behavior") {
  MotionField src = MotionField::disparity(10, 4);
  for (float& v : src.values) v = 10.0f;

  SUBCASE("zero disparity is the identity") {
    const MotionField out = warp_grid(src, MotionField::disparity(10, 4));
    for (float v : out.values) CHECK(v == 10.0f);
  }

  SUBCASE("constant disparity invalidates the left border") {
    MotionField disp = MotionField::disparity(10, 4);
    for (float& v : disp.values) v = 2.0f;
    const MotionField out = warp_grid(src, disp);
    for (int y = 0; y < 4; ++y) {
      CHECK(!std::isfinite(out.at(0, y, 0)));
      CHECK(!std::isfinite(out.at(1, y, 0)));
      for (int x = 2; x < 10; ++x) CHECK(out.at(x, y, 0) == 10.0f);
    }
  }

  SUBCASE("linear ramp shifts by one") {
    MotionField ramp = MotionField::disparity(10, 4);
    for (int y = 0; y < 4; ++y) {
      for (int x = 0; x < 10; ++x) ramp.at(x, y, 0) = float(x);
    }
    MotionField disp = MotionField::disparity(10, 4);
    for (float& v : disp.values) v = 1.0f;
    const MotionField out = warp_grid(ramp, disp);
    for (int y = 0; y < 4; ++y) {
      CHECK(!std::isfinite(out.at(0, y, 0)));
      for (int x = 1; x < 10; ++x) CHECK(out.at(x, y, 0) == doctest::Approx(x - 1.0));
    }
  }
}

TEST_CASE("warp_grid rejects mismatched dimensions") {
  CHECK_THROWS_AS(warp_grid(MotionField::disparity(4, 4), MotionField::disparity(5, 4)),
                  Error);
}
