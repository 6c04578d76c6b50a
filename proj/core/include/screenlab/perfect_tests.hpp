#pragma once

#include <optional>
#include <vector>

#include "screenlab/best_response.hpp"
#include "screenlab/geometry.hpp"

namespace screenlab {

struct ConvexPolygon {
  std::vector<Point> vertices;  // counterclockwise

  // Orders the vertices counterclockwise; throws std::invalid_argument when
  // the input is not a non-degenerate convex polygon.
  static ConvexPolygon make(std::vector<Point> vertices);

  bool contains(Point p, double tol = kBoundaryTol) const;
  double area() const;
  Point closest_point(Point p) const;
  double distance(Point p) const { return screenlab::distance(p, closest_point(p)); }
  double perimeter() const;
  Point lo() const;
  Point hi() const;
};

ConvexPolygon convex_hull(std::vector<Point> points);
// Circumscribed approximation: straight edges are tangent to the corner arcs.
ConvexPolygon rounded_rectangle(Point lo, Point hi, double radius, int segments_per_corner = 64);
ConvexPolygon regular_polygon(Point center, double radius, int n);
// Extra distance-to-erosion at a vertex turning by `turning_angle` (radians), for erosion radius r.
double sagitta_slack(double r, double turning_angle);

struct ErodedRegion {
  ConvexPolygon source;
  double radius = 0.0;
  std::optional<ConvexPolygon> Q;

  bool empty() const { return !Q.has_value(); }
};

ErodedRegion erode(const ConvexPolygon& H, double r);

// Distance from p to Q (0 inside); throws EmptyRegion.
double ring_distance(Point p, const ErodedRegion& Q);

enum class AdaptiveDecision { Accept, Reject, ImmediateAccept, ImmediateReject };

const char* to_string(AdaptiveDecision d);
inline bool is_accepted(AdaptiveDecision d) {
  return d == AdaptiveDecision::Accept || d == AdaptiveDecision::ImmediateAccept;
}

inline constexpr double kRingTol = 1e-9;

AdaptiveDecision adaptive_accept(const ConvexPolygon& H, const ErodedRegion& Q, Point x1, Point x2);

BestResponse perfect_best_response(Point x, const ConvexPolygon& H, const ErodedRegion& Q, double eta);

struct CriterionReport {
  bool holds = false;
  bool empty_erosion = false;
  double worst_distance = 0.0;
  double tolerance = 0.0;
  Point witness;
};

// True iff every point of H lies within 1/eta (+1e-6 + approximation_slack) of
// the erosion. The distance is convex, so boundary samples plus vertices suffice.
CriterionReport single_test_criterion(const ConvexPolygon& H, double eta, int boundary_samples,
                                      double approximation_slack = 0.0);

// Unbounded wedge clipped to an axis-aligned box.
ConvexPolygon clip_to_box(const Wedge& w, Point lo, Point hi);

}  // namespace screenlab
