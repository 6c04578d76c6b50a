#include "screenlab/geometry.hpp"

#include <gtest/gtest.h>

#include "screenlab/errors.hpp"
#include "testing.hpp"

using namespace screenlab;
using screenlab::testing::expect_near;

namespace {

const HalfPlane kX{{1.0, 0.0}, 0.0};
const HalfPlane kY{{0.0, 1.0}, 0.0};
const HalfPlane kSlope = HalfPlane::make({-0.6, 0.8}, 0.2);  // y >= 0.75x + 0.25

// Brute-force nearest point on the boundary line: sweep the line parameter.
Point sweep_projection(const HalfPlane& h, Point p, double step) {
  const Point a = h.anchor(), d = h.direction();
  Point best = a;
  for (double t = -10.0; t <= 10.0; t += step) {
    const Point c = a + t * d;
    if (distance(c, p) < distance(best, p)) best = c;
  }
  return best;
}

}  // namespace

TEST(SignedMargin, Examples) {
  EXPECT_DOUBLE_EQ(signed_margin(kX, {3, 7}), 3.0);
  EXPECT_DOUBLE_EQ(signed_margin(kX, {0, -5}), 0.0);
  EXPECT_NEAR(signed_margin(kSlope, {1, 1}), 0.0, 1e-15);
}

TEST(SignedMargin, MakeNormalizes) {
  const HalfPlane h = HalfPlane::make({0.0, -2.0}, 4.0);
  EXPECT_DOUBLE_EQ(norm(h.normal), 1.0);
  EXPECT_TRUE(h.satisfies({0, -2}));
  EXPECT_FALSE(h.satisfies({0, -1.9}));
}

TEST(Projection, AxisAligned) {
  expect_near(project_to_boundary(kX, {-2, 3}), {0, 3}, 1e-15);
  expect_near(project_to_boundary(kY, {4, 0}), {4, 0}, 1e-15);
}

TEST(Projection, SlopedBoundaryMatchesSweep) {
  const Point p{1.1, 0.8};
  const Point swept = sweep_projection(kSlope, p, 1e-4);
  expect_near(swept, {0.968, 0.976}, 1e-4);
  expect_near(project_to_boundary(kSlope, p), {0.968, 0.976}, 1e-12);
}

TEST(Projection, IntoKeepsFeasiblePoints) {
  expect_near(project_into(kX, {2, 1}), {2, 1}, 0.0);
  expect_near(project_into(kX, {-2, 1}), {0, 1}, 0.0);
}

TEST(Reflect, Examples) {
  expect_near(reflect(kX, {2, 5}), {-2, 5}, 1e-15);
  expect_near(reflect(kX, {0, 9}), {0, 9}, 1e-15);
  expect_near(reflect(HalfPlane::make({-1, 1}, 0), {1, 0}), {0, 1}, 1e-15);
}

TEST(Reflect, InvolutionAndMarginFlip) {
  Rng rng(11);
  for (int i = 0; i < 10000; ++i) {
    const HalfPlane h = screenlab::testing::random_halfplane(rng);
    const Point p = rng.in_box({-5, -5}, {5, 5});
    const Point r = reflect(h, p);
    ASSERT_NEAR(distance(reflect(h, r), p), 0.0, 1e-9);
    ASSERT_NEAR(signed_margin(h, r), -signed_margin(h, p), 1e-9);
  }
}

TEST(WedgeFrom, Quadrant) {
  const Wedge w = wedge_from(kX, kY);
  expect_near(w.apex, {0, 0}, 1e-15);
  EXPECT_NEAR(w.theta, 90.0, 1e-12);
}

TEST(WedgeFrom, RunningExample) {
  const Wedge w = screenlab::testing::example_wedge();
  expect_near(w.apex, {1, 1}, 1e-12);
  EXPECT_NEAR(w.theta, rad2deg(std::atan(4.0 / 3.0)), 1e-9);
  EXPECT_NEAR(w.theta, 53.13, 0.01);
}

TEST(WedgeFrom, ParallelBoundariesThrow) {
  try {
    wedge_from(kX, HalfPlane{{1.0, 0.0}, 1.0});
    FAIL() << "expected ParallelBoundaries";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParallelBoundaries);
  }
}

TEST(WedgeFrom, ObtuseAngle) {
  const Wedge w = canonical_wedge(120.0);
  EXPECT_NEAR(w.theta, 120.0, 1e-9);
  EXPECT_TRUE(w.contains({1, 0}));
  EXPECT_TRUE(w.contains(w.apex + w.ray_b()));
  EXPECT_TRUE(w.contains({std::sin(deg2rad(120.0)), std::cos(deg2rad(120.0))}));
  EXPECT_FALSE(w.contains({0, -1}));
}

TEST(ClosestPointInWedge, QuadrantCases) {
  const Wedge w = wedge_from(kX, kY);
  auto [p1, d1] = closest_point_in_wedge(w, {-3, -4});
  expect_near(p1, {0, 0}, 1e-15);
  EXPECT_DOUBLE_EQ(d1, 5.0);
  auto [p2, d2] = closest_point_in_wedge(w, {-3, 4});
  expect_near(p2, {0, 4}, 1e-15);
  EXPECT_DOUBLE_EQ(d2, 3.0);
  auto [p3, d3] = closest_point_in_wedge(w, {2, 1});
  expect_near(p3, {2, 1}, 0.0);
  EXPECT_DOUBLE_EQ(d3, 0.0);
}

TEST(ClosestPointInWedge, BeatsRandomFeasiblePoints) {
  Rng rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const Wedge w = screenlab::testing::random_wedge(rng);
    const Point p = rng.in_box({-4, -4}, {4, 4});
    const auto [c, d] = closest_point_in_wedge(w, p);
    ASSERT_TRUE(w.contains(c, 1e-9));
    ASSERT_NEAR(d, distance(c, p), 1e-12);
    for (int k = 0; k < 1000; ++k) {
      const Point y = rng.in_box({-8, -8}, {8, 8});
      if (w.contains(y, 0.0)) {
        ASSERT_LE(d, distance(y, p) + 1e-12);
      }
    }
  }
}

TEST(DistanceToRay, Examples) {
  EXPECT_DOUBLE_EQ(distance_to_ray({0, 2}, {0, 0}, {1, 0}), 2.0);
  EXPECT_DOUBLE_EQ(distance_to_ray({-3, 4}, {0, 0}, {1, 0}), 5.0);
  EXPECT_DOUBLE_EQ(distance_to_ray({5, -1}, {0, 0}, {1, 0}), 1.0);
}

TEST(CanonicalFrame, RoundTrip) {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const Wedge w = screenlab::testing::random_wedge(rng);
    const CanonicalFrame f = canonical_frame(w);
    for (int k = 0; k < 1000; ++k) {
      const Point p = rng.in_box({-5, -5}, {5, 5});
      ASSERT_NEAR(distance(f.to_world(f.to_canonical(p)), p), 0.0, 1e-9);
    }
  }
}

TEST(CanonicalFrame, MapsNormalsToStandardPosition) {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const Wedge w = screenlab::testing::random_wedge(rng);
    const CanonicalFrame f = canonical_frame(w);
    const double t = deg2rad(w.theta);
    expect_near(f.to_canonical(w.apex), {0, 0}, 1e-9);
    expect_near(f.vector_to_canonical(w.a.normal), {1, 0}, 1e-9);
    expect_near(f.vector_to_canonical(w.b.normal), {-std::cos(t), std::sin(t)}, 1e-9);
  }
}
