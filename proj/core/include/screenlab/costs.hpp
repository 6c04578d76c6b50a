#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "screenlab/geometry.hpp"
#include "screenlab/random.hpp"

namespace screenlab {

enum class CostKind { Euclidean, WeightedNorm, Custom };

using MetricFn = std::function<double(Point, Point)>;
using PathFn = std::function<double(Point, Point, Point)>;

struct CostModel {
  CostKind kind = CostKind::Euclidean;
  double eta = 1.0;
  // WeightedNorm: C(x,y) = eta * sqrt(wx*dx^2 + wy*dy^2).
  double wx = 1.0;
  double wy = 1.0;
  // Custom: metric returns the full one-step cost; path defaults to additive.
  MetricFn metric;
  PathFn path;
  // Half-length of boundary sweeps for custom metrics.
  double search_radius = 10.0;
  int sweep_points = 2001;

  static CostModel euclidean(double eta = 1.0);
  static CostModel weighted(double wx, double wy, double eta = 1.0);
  static CostModel custom(MetricFn metric, double eta = 1.0, PathFn path = {});

  // Unit benefit reach: cost of 1 corresponds to this Euclidean length.
  double reach() const { return 1.0 / eta; }
};

std::string to_string(CostKind kind);

double one_step_cost(const CostModel& cm, Point x, Point y);
double path_cost(const CostModel& cm, Point x0, Point x1, Point x2);

struct MinCost {
  Point point;
  double cost = 0.0;
};

MinCost min_cost_into(const CostModel& cm, Point x, const HalfPlane& target);
MinCost min_cost_into(const CostModel& cm, Point x, const Wedge& target);

// Weighted norms are Euclidean after the linear map p -> (sqrt(wx) p.x, sqrt(wy) p.y).
Point to_metric_space(const CostModel& cm, Point p);
Point from_metric_space(const CostModel& cm, Point p);
HalfPlane to_metric_space(const CostModel& cm, const HalfPlane& h);
HalfPlane from_metric_space(const CostModel& cm, const HalfPlane& h);

struct AxiomCheck {
  std::string name;
  bool holds = true;
  double worst_violation = 0.0;
  std::vector<Point> witness;
};

struct AxiomReport {
  std::vector<AxiomCheck> checks;
  std::size_t n = 0;
  std::uint64_t seed = 0;

  bool all_hold() const;
  const AxiomCheck& get(const std::string& name) const;
};

inline constexpr double kAxiomTol = 1e-9;

namespace detail {
// Golden-section minimization of a unimodal f on [lo, hi].
double golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                          double tol = 1e-11);
// Dense sweep then golden refinement; throws NoMinimizer when the best sample
// sits on an edge that is not allowed to be optimal.
std::pair<double, double> sweep_min(const std::function<double(double)>& f, double lo, double hi,
                                    int samples, bool lo_edge_ok, bool hi_edge_ok);
}  // namespace detail

AxiomReport check_axioms(const CostModel& cm, const Sampler& sampler, std::size_t n,
                         std::uint64_t seed = 1);

}  // namespace screenlab
