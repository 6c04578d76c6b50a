#include "screenlab/costs.hpp"

#include <gtest/gtest.h>

#include "screenlab/errors.hpp"
#include "testing.hpp"

using namespace screenlab;
using screenlab::testing::expect_near;

namespace {

const HalfPlane kX{{1.0, 0.0}, 0.0};
const HalfPlane kY{{0.0, 1.0}, 0.0};

}  // namespace

TEST(OneStepCost, Euclidean) {
  EXPECT_DOUBLE_EQ(one_step_cost(CostModel::euclidean(1.0), {0, 0}, {3, 4}), 5.0);
  EXPECT_DOUBLE_EQ(one_step_cost(CostModel::euclidean(2.0), {0, 0}, {3, 4}), 10.0);
  EXPECT_DOUBLE_EQ(one_step_cost(CostModel::euclidean(1.0), {1, 1}, {1, 1}), 0.0);
}

TEST(PathCost, Euclidean) {
  const auto cm = CostModel::euclidean(1.0);
  EXPECT_DOUBLE_EQ(path_cost(cm, {0, 0}, {0, 3}, {4, 3}), 7.0);
  EXPECT_DOUBLE_EQ(path_cost(cm, {0, 0}, {0, 0}, {3, 4}), 5.0);
  EXPECT_DOUBLE_EQ(path_cost(cm, {0, 0}, {3, 4}, {3, 4}), 5.0);
}

TEST(MinCostInto, HalfPlaneAndWedge) {
  const auto cm = CostModel::euclidean(1.0);
  const MinCost a = min_cost_into(cm, {-2, 5}, kX);
  expect_near(a.point, {0, 5}, 1e-15);
  EXPECT_DOUBLE_EQ(a.cost, 2.0);
  const MinCost b = min_cost_into(cm, {-3, -4}, wedge_from(kX, kY));
  expect_near(b.point, {0, 0}, 1e-15);
  EXPECT_DOUBLE_EQ(b.cost, 5.0);
}

TEST(MinCostInto, WeightedNormAgainstGrid) {
  const auto cm = CostModel::weighted(4.0, 1.0, 1.0);
  const Point x{-1, -1};
  // Lattice search over the target's boundary strip.
  double best = 1e9;
  Point arg;
  for (int i = 0; i <= 2000; ++i)
    for (int j = -2000; j <= 2000; j += 1) {
      const Point y{i * 1e-3, j * 1e-3};
      if (y.x > 0.5) break;
      const double c = one_step_cost(cm, x, y);
      if (c < best) best = c, arg = y;
    }
  expect_near(arg, {0, -1}, 1e-3);
  EXPECT_NEAR(best, 2.0, 1e-3);

  const MinCost m = min_cost_into(cm, x, kX);
  expect_near(m.point, {0, -1}, 1e-12);
  EXPECT_NEAR(m.cost, 2.0, 1e-12);
}

TEST(MinCostInto, CustomMetricMatchesEuclidean) {
  const auto eu = CostModel::euclidean(1.0);
  const auto cu = CostModel::custom([](Point a, Point b) { return distance(a, b); });
  Rng rng(9);
  for (int i = 0; i < 50; ++i) {
    const HalfPlane h = screenlab::testing::random_halfplane(rng);
    const Point x = rng.in_box({-3, -3}, {3, 3});
    EXPECT_NEAR(min_cost_into(cu, x, h).cost, min_cost_into(eu, x, h).cost, 1e-6);
  }
}

TEST(CheckAxioms, EuclideanHolds) {
  const auto r = check_axioms(CostModel::euclidean(1.0), box_sampler({-3, -3}, {3, 3}), 10000, 1);
  EXPECT_TRUE(r.all_hold());
  for (const auto& c : r.checks) EXPECT_LE(c.worst_violation, kAxiomTol) << c.name;
}

TEST(CheckAxioms, WeightedHolds) {
  const auto r = check_axioms(CostModel::weighted(4.0, 1.0, 1.5), box_sampler({-3, -3}, {3, 3}), 10000, 2);
  EXPECT_TRUE(r.all_hold());
}

TEST(CheckAxioms, BrokenMonotonicityIsCaught) {
  auto C = [](Point a, Point b) { return distance(a, b); };
  const auto cm = CostModel::custom(C, 1.0, [C](Point x0, Point x1, Point) { return C(x0, x1) - 0.1; });
  const auto r = check_axioms(cm, box_sampler({-3, -3}, {3, 3}), 10000, 3);
  EXPECT_FALSE(r.all_hold());
  const auto& mono = r.get("monotonicity");
  EXPECT_FALSE(mono.holds);
  EXPECT_FALSE(mono.witness.empty());
}

TEST(CostInvariants, PathDominatesEachLeg) {
  const auto cm = CostModel::euclidean(1.3);
  Rng rng(21);
  for (int i = 0; i < 10000; ++i) {
    const Point a = rng.in_box({-5, -5}, {5, 5}), b = rng.in_box({-5, -5}, {5, 5}), c = rng.in_box({-5, -5}, {5, 5});
    ASSERT_GE(path_cost(cm, a, b, c) + 1e-12, one_step_cost(cm, a, c));
    ASSERT_GE(path_cost(cm, a, b, c) + 1e-12, one_step_cost(cm, a, b));
  }
}

TEST(CostInvariants, TranslationAndHomogeneity) {
  const auto cm = CostModel::weighted(2.0, 0.5, 1.0);
  Rng rng(22);
  for (int i = 0; i < 1000; ++i) {
    const Point a = rng.in_box({-5, -5}, {5, 5}), b = rng.in_box({-5, -5}, {5, 5}), c = rng.in_box({-5, -5}, {5, 5});
    const Point s = rng.in_box({-9, -9}, {9, 9});
    const double alpha = rng.uniform(-3.0, 3.0);
    const double base = path_cost(cm, a, b, c);
    ASSERT_NEAR(path_cost(cm, a + s, b + s, c + s), base, 1e-9);
    ASSERT_NEAR(path_cost(cm, alpha * a, alpha * b, alpha * c), std::abs(alpha) * base, 1e-9);
  }
}

TEST(MetricSpace, RoundTrip) {
  const auto cm = CostModel::weighted(4.0, 9.0);
  const Point p{1.5, -2.0};
  expect_near(from_metric_space(cm, to_metric_space(cm, p)), p, 1e-15);
  const HalfPlane h = HalfPlane::make({1, 1}, 0.5);
  const HalfPlane back = from_metric_space(cm, to_metric_space(cm, h));
  expect_near(back.normal, h.normal, 1e-12);
  EXPECT_NEAR(back.offset, h.offset, 1e-12);
}
