#pragma once

#include <gtest/gtest.h>

#include "screenlab/geometry.hpp"
#include "screenlab/random.hpp"

namespace screenlab::testing {

inline void expect_near(Point a, Point b, double tol) {
  EXPECT_NEAR(a.x, b.x, tol) << "x of (" << a.x << ", " << a.y << ")";
  EXPECT_NEAR(a.y, b.y, tol) << "y of (" << a.x << ", " << a.y << ")";
}

inline HalfPlane random_halfplane(Rng& rng) {
  const double t = rng.uniform(0.0, 2.0 * kPi);
  return {{std::cos(t), std::sin(t)}, rng.uniform(-3.0, 3.0)};
}

inline Wedge random_wedge(Rng& rng, double lo_deg = 10.0, double hi_deg = 170.0) {
  return canonical_wedge(rng.uniform(lo_deg, hi_deg), rng.in_box({-2, -2}, {2, 2}), rng.uniform(0.0, 360.0));
}

// Line {x >= 1} and the line of slope 3/4 through (1, 1), as in the running example.
inline Wedge example_wedge() {
  return wedge_from(HalfPlane::make({1.0, 0.0}, 1.0), HalfPlane::make({-0.75, 1.0}, 0.25));
}

}  // namespace screenlab::testing
