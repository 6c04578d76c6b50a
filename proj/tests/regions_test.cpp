#include "screenlab/regions.hpp"

#include <gtest/gtest.h>

#include "screenlab/best_response.hpp"
#include "screenlab/errors.hpp"
#include "testing.hpp"

using namespace screenlab;
using screenlab::testing::expect_near;

namespace {

RegionSpec spec_for(double theta, double q, double eta = 1.0, Point apex = {0, 0}, double rot = 0.0) {
  const Wedge w = canonical_wedge(theta, apex, rot);
  return canonical_region_spec(w.a, w.b, q, eta);
}

}  // namespace

TEST(RegionSpec, Markers60) {
  const RegionSpec s = spec_for(60.0, 0.5);
  expect_near(s.Eq, {0.25, -0.43301}, 1e-5);
  expect_near(s.Eq_tilde, {0.0, -0.57735}, 1e-5);
  EXPECT_TRUE(member(s, RegionSet::Cq, s.to_world(s.Eq_tilde)));
  EXPECT_FALSE(s.quads_empty);
}

TEST(RegionSpec, QuadsEmptyAtRightAngle) {
  for (double q : {0.0, 0.3, 0.5, 1.0}) {
    const RegionSpec s = spec_for(90.0, q);
    EXPECT_TRUE(s.quads_empty);
    Rng rng(static_cast<std::uint64_t>(q * 10) + 1);
    for (int i = 0; i < 2000; ++i) {
      const Point p = rng.in_box({-3, -3}, {3, 3});
      ASSERT_FALSE(member(s, RegionSet::Cq, p));
      ASSERT_FALSE(member(s, RegionSet::Dq, p));
    }
  }
}

TEST(RegionSpec, DegenerateC0) {
  const RegionSpec s = spec_for(60.0, 0.0);
  EXPECT_TRUE(member(s, RegionSet::Cq, {0, 0}));
  EXPECT_FALSE(member(s, RegionSet::Cq, {0.0, -0.01}));
  EXPECT_FALSE(member(s, RegionSet::Cq, {0.01, -0.01}));
}

TEST(RegionSpec, VertexInvariants) {
  Rng rng(51);
  for (int i = 0; i < 1000; ++i) {
    const double theta = rng.uniform(5.0, 89.0), q = rng.uniform(), eta = rng.uniform(0.3, 3.0);
    const RegionSpec s = spec_for(theta, q, eta, rng.in_box({-2, -2}, {2, 2}), rng.uniform(0.0, 360.0));
    const double t = deg2rad(theta);
    const Point wA{1, 0}, wB{-std::cos(t), std::sin(t)};
    expect_near(s.Eq, -(q / eta) * wB, 1e-9);
    expect_near(s.Eq_tilde, {0.0, -q / (eta * std::sin(t))}, 1e-9);
    expect_near(s.G1q, -((1 - q) / eta) * wA, 1e-9);
    expect_near(s.G1q_tilde, {-(1 - q) / eta, -(1 - q) / (eta * std::tan(t))}, 1e-9);
    expect_near(s.G, {0.0, -1.0 / (eta * std::sin(2 * t))}, 1e-9);
    expect_near(s.E, {-1.0 / (2 * eta * std::cos(t)), -1.0 / (2 * eta * std::sin(t))}, 1e-9);
    // Ẽ_q sits on h̃_A's boundary, q/η outside h̃_B.
    ASSERT_NEAR(s.Eq_tilde.x, 0.0, 1e-12);
    ASSERT_NEAR(-dot(wB, s.Eq_tilde), q / eta, 1e-9);
  }
}

TEST(Member, DiscBoundary) {
  const RegionSpec s = spec_for(60.0, 0.5);
  // Direction into Ω: opposite the wedge bisector.
  const double t = deg2rad(60.0);
  const Point into_omega = -normalized(Point{0, 1} + Point{std::sin(t), std::cos(t)});
  EXPECT_TRUE(member(s, RegionSet::BO, 0.99 * into_omega));
  EXPECT_FALSE(member(s, RegionSet::BO, 1.01 * into_omega));
}

TEST(Member, StripWidth) {
  const RegionSpec s = spec_for(60.0, 0.5);
  EXPECT_TRUE(member(s, RegionSet::Astrip, {-0.5, 3.0}));
  EXPECT_FALSE(member(s, RegionSet::Astrip, {-1.5, 3.0}));
}

TEST(Member, UnknownSet) {
  EXPECT_EQ(parse_region_set("Mq"), RegionSet::Mq);
  try {
    parse_region_set("Zq");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownSet);
  }
}

TEST(Member, AgreesWithBestResponse) {
  Rng rng(52);
  const auto cm = CostModel::euclidean(1.0);
  for (int k = 0; k < 20; ++k) {
    const double theta = rng.uniform(15.0, 150.0), q = rng.uniform();
    const Wedge w = canonical_wedge(theta, rng.in_box({-1, -1}, {1, 1}), rng.uniform(0.0, 360.0));
    const RegionSpec s = canonical_region_spec(w.a, w.b, q, 1.0);
    const Sequential m{w.a, w.b, q, Disclosure::NoDisclose};
    const Sampler sample = region_box_sampler(s);
    for (int i = 0; i < 10000; ++i) {
      const Point p = sample(rng);
      const bool solver = best_response(p, m, Setting::Manipulation, cm).acceptance_prob > 0.0 && !w.contains(p);
      ASSERT_EQ(member(s, RegionSet::Mq, p), solver)
          << "theta " << theta << " q " << q << " canonical p " << s.frame.to_canonical(p).x << ","
          << s.frame.to_canonical(p).y;
    }
  }
}

TEST(Inclusion, CqMonotoneInQ) {
  for (double theta : {30.0, 45.0, 70.0}) {
    for (double q : {0.1, 0.4, 0.7}) {
      const RegionSpec lo = spec_for(theta, q), hi = spec_for(theta, q + 0.2);
      const auto r = inclusion_sample([&](Point p) { return member(lo, RegionSet::Cq, p); },
                                      [&](Point p) { return member(hi, RegionSet::Cq, p); },
                                      centered_sampler({0, 0}, 1.5), 20000, 3);
      EXPECT_TRUE(r.holds) << theta << " " << q;
    }
  }
}

TEST(Inclusion, Threshold45) {
  auto check = [](double q) {
    const RegionSpec c = spec_for(45.0, q), d = spec_for(45.0, 0.0);
    return inclusion_sample([&](Point p) { return member(c, RegionSet::Cq, p); },
                            [&](Point p) { return member(d, RegionSet::Dq, p) || member(d, RegionSet::BO, p); },
                            region_box_sampler(c), 100000, 7);
  };
  EXPECT_TRUE(check(0.70).holds);
  const auto r = check(0.72);
  EXPECT_FALSE(r.holds);
  ASSERT_FALSE(r.violation_witnesses.empty());
  const RegionSpec s = spec_for(45.0, 0.72);
  EXPECT_LT(distance(r.violation_witnesses.front(), s.to_world(s.Eq_tilde)), 0.1);
}

TEST(Inclusion, CoverThresholds) {
  EXPECT_NEAR(cq_cover_threshold(45.0), 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(cq_cover_threshold(30.0), 1.0 / std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(cq_cover_threshold(60.0), std::sin(deg2rad(60.0)), 1e-12);
  EXPECT_NEAR(dq_cover_threshold(45.0), 1.0 - 1.0 / std::sqrt(2.0), 1e-12);
}

TEST(Inclusion, ReportsSeedAndCount) {
  const auto r = inclusion_sample([](Point p) { return p.x > 0; }, [](Point p) { return p.x > 0.5; },
                                  box_sampler({-1, -1}, {1, 1}), 1000, 4, 3);
  EXPECT_FALSE(r.holds);
  EXPECT_EQ(r.n, 1000u);
  EXPECT_EQ(r.seed, 4u);
  EXPECT_EQ(r.violation_witnesses.size(), 3u);
  EXPECT_GT(r.violations, 150u);
}
