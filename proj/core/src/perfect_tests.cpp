#include "screenlab/perfect_tests.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "screenlab/errors.hpp"

namespace screenlab {

namespace {

constexpr double kConvexTol = 1e-9;

double signed_area(const std::vector<Point>& v) {
  double a = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) a += cross(v[i], v[(i + 1) % v.size()]);
  return 0.5 * a;
}

Point closest_on_segment(Point p, Point a, Point b) {
  const Point e = b - a;
  const double len2 = dot(e, e);
  if (len2 == 0.0) return a;
  const double t = std::clamp(dot(p - a, e) / len2, 0.0, 1.0);
  return a + t * e;
}

// Keeps the part of `poly` with n·p >= b.
std::vector<Point> clip(const std::vector<Point>& poly, Point n, double b) {
  std::vector<Point> out;
  const std::size_t m = poly.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Point a = poly[i], c = poly[(i + 1) % m];
    const double fa = dot(n, a) - b, fc = dot(n, c) - b;
    if (fa >= 0.0) out.push_back(a);
    if ((fa >= 0.0) != (fc >= 0.0)) out.push_back(a + (fa / (fa - fc)) * (c - a));
  }
  return out;
}

std::vector<Point> dedupe(const std::vector<Point>& v) {
  std::vector<Point> out;
  for (Point p : v)
    if (out.empty() || distance(out.back(), p) > 1e-12) out.push_back(p);
  while (out.size() > 1 && distance(out.front(), out.back()) <= 1e-12) out.pop_back();
  return out;
}

}  // namespace

ConvexPolygon ConvexPolygon::make(std::vector<Point> vertices) {
  if (vertices.size() < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
  if (signed_area(vertices) < 0.0) std::reverse(vertices.begin(), vertices.end());
  if (signed_area(vertices) <= kConvexTol) throw std::invalid_argument("degenerate polygon");
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = vertices[i], b = vertices[(i + 1) % n], c = vertices[(i + 2) % n];
    if (cross(b - a, c - b) < -kConvexTol * norm(b - a) * norm(c - b))
      throw std::invalid_argument("polygon is not convex");
  }
  return ConvexPolygon{std::move(vertices)};
}

bool ConvexPolygon::contains(Point p, double tol) const {
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = vertices[i], e = vertices[(i + 1) % n] - a;
    if (cross(e, p - a) < -tol * norm(e)) return false;
  }
  return true;
}

double ConvexPolygon::area() const { return signed_area(vertices); }

Point ConvexPolygon::closest_point(Point p) const {
  if (contains(p, 0.0)) return p;
  Point best = vertices.front();
  double best_d = screenlab::distance(p, best);
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const Point c = closest_on_segment(p, vertices[i], vertices[(i + 1) % vertices.size()]);
    const double d = screenlab::distance(p, c);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

double ConvexPolygon::perimeter() const {
  double s = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i)
    s += screenlab::distance(vertices[i], vertices[(i + 1) % vertices.size()]);
  return s;
}

Point ConvexPolygon::lo() const {
  Point l = vertices.front();
  for (Point v : vertices) l = {std::min(l.x, v.x), std::min(l.y, v.y)};
  return l;
}

Point ConvexPolygon::hi() const {
  Point h = vertices.front();
  for (Point v : vertices) h = {std::max(h.x, v.x), std::max(h.y, v.y)};
  return h;
}

ConvexPolygon convex_hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), [](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(hull[k - 1] - hull[k - 2], pts[i - 1] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i - 1];
  }
  hull.resize(k - 1);
  return ConvexPolygon::make(std::move(hull));
}

ConvexPolygon rounded_rectangle(Point lo, Point hi, double radius, int segments_per_corner) {
  const Point centers[4] = {{hi.x - radius, lo.y + radius},
                            {hi.x - radius, hi.y - radius},
                            {lo.x + radius, hi.y - radius},
                            {lo.x + radius, lo.y + radius}};
  const double step = (kPi / 2.0) / segments_per_corner;
  const double reach = radius / std::cos(step / 2.0);
  std::vector<Point> v;
  for (int c = 0; c < 4; ++c) {
    const double start = -kPi / 2.0 + c * kPi / 2.0;
    // Tangent points at the corner ends, circumscribed vertices in between.
    v.push_back(centers[c] + radius * Point{std::cos(start), std::sin(start)});
    for (int k = 0; k < segments_per_corner; ++k) {
      const double a = start + (k + 0.5) * step;
      v.push_back(centers[c] + reach * Point{std::cos(a), std::sin(a)});
    }
    const double end = start + kPi / 2.0;
    v.push_back(centers[c] + radius * Point{std::cos(end), std::sin(end)});
  }
  return ConvexPolygon::make(dedupe(v));
}

ConvexPolygon regular_polygon(Point center, double radius, int n) {
  std::vector<Point> v;
  for (int k = 0; k < n; ++k) {
    const double a = 2.0 * kPi * k / n;
    v.push_back(center + radius * Point{std::cos(a), std::sin(a)});
  }
  return ConvexPolygon::make(std::move(v));
}

double sagitta_slack(double r, double turning_angle) { return r * (1.0 / std::cos(turning_angle / 2.0) - 1.0); }

ErodedRegion erode(const ConvexPolygon& H, double r) {
  ErodedRegion out{H, r, std::nullopt};
  std::vector<Point> poly = H.vertices;
  const std::size_t n = H.vertices.size();
  for (std::size_t i = 0; i < n && poly.size() >= 3; ++i) {
    const Point a = H.vertices[i], e = H.vertices[(i + 1) % n] - a;
    const Point inward = normalized(perp(e));
    poly = dedupe(clip(poly, inward, dot(inward, a) + r));
  }
  if (poly.size() >= 3 && signed_area(poly) > 1e-12) out.Q = ConvexPolygon{std::move(poly)};
  return out;
}

double ring_distance(Point p, const ErodedRegion& Q) {
  if (Q.empty()) throw Error(ErrorCode::EmptyRegion, "erosion is empty");
  return Q.Q->distance(p);
}

const char* to_string(AdaptiveDecision d) {
  switch (d) {
    case AdaptiveDecision::Accept: return "accept";
    case AdaptiveDecision::Reject: return "reject";
    case AdaptiveDecision::ImmediateAccept: return "immediate_accept";
    case AdaptiveDecision::ImmediateReject: return "immediate_reject";
  }
  return "unknown";
}

AdaptiveDecision adaptive_accept(const ConvexPolygon& H, const ErodedRegion& Q, Point x1, Point x2) {
  if (Q.empty()) throw Error(ErrorCode::EmptyRegion, "erosion is empty");
  if (!H.contains(x1)) return AdaptiveDecision::ImmediateReject;
  const double r1 = Q.Q->distance(x1);
  if (r1 <= kRingTol) return AdaptiveDecision::ImmediateAccept;
  const double d2 = Q.Q->distance(x2);
  const bool ok = r1 <= Q.radius + kRingTol ? d2 <= kRingTol : std::abs(d2 - (r1 - Q.radius)) <= kRingTol;
  return ok ? AdaptiveDecision::Accept : AdaptiveDecision::Reject;
}

BestResponse perfect_best_response(Point x, const ConvexPolygon& H, const ErodedRegion& Q, double eta) {
  if (Q.empty()) throw Error(ErrorCode::EmptyRegion, "erosion is empty");
  const double r = Q.radius;
  struct Option {
    Point x1, x2;
    double cost;
  };
  // Second stage from a first-stage point in H: reach Q, or the ring r1 - r.
  auto from = [&](Point x1, double sunk) {
    const Point cq = Q.Q->closest_point(x1);
    const double r1 = screenlab::distance(x1, cq);
    if (r1 <= r) return Option{x1, cq, sunk + eta * r1};
    return Option{x1, x1 + (r / r1) * (cq - x1), sunk + eta * r};
  };
  // Staged option first: on a cost tie the type waits for the first test.
  std::vector<Option> options;
  if (H.contains(x)) {
    options.push_back(from(x, 0.0));
  } else {
    const Point xh = H.closest_point(x);
    options.push_back(from(xh, eta * screenlab::distance(x, xh)));
  }
  const Point cq = Q.Q->closest_point(x);
  options.push_back({cq, cq, eta * screenlab::distance(x, cq)});
  BestResponse br;
  br.type = x;
  br.final_if_A_first = br.final_if_B_first = x;
  const Option* best = nullptr;
  for (const auto& o : options) {
    const bool ok = is_accepted(adaptive_accept(H, Q, o.x1, o.x2));
    if (!ok || 1.0 - o.cost < -kTieTol) continue;
    if (!best || o.cost < best->cost) best = &o;
  }
  if (!best) {
    br.branches.push_back({0, Order::AFirst, 1.0, false, x});
    return br;
  }
  if (best->x1 == best->x2) {
    br.strategy = OneStep{best->x1};
    br.strategy_class = "one-step";
  } else {
    br.strategy = TwoStep{best->x1, best->x2};
    br.strategy_class = "two-step";
  }
  br.total_expected_cost = best->cost;
  br.acceptance_prob = 1.0;
  br.expected_utility = 1.0 - best->cost;
  br.final_if_A_first = br.final_if_B_first = best->x2;
  br.branches.push_back({0, Order::AFirst, 1.0, true, best->x2});
  return br;
}

CriterionReport single_test_criterion(const ConvexPolygon& H, double eta, int boundary_samples,
                                      double approximation_slack) {
  CriterionReport rep;
  const double r = 1.0 / eta;
  rep.tolerance = 1e-6 + approximation_slack;
  const ErodedRegion Q = erode(H, r);
  if (Q.empty()) {
    rep.empty_erosion = true;
    return rep;
  }
  auto visit = [&](Point p) {
    const double d = Q.Q->distance(p);
    if (d > rep.worst_distance) {
      rep.worst_distance = d;
      rep.witness = p;
    }
  };
  for (Point v : H.vertices) visit(v);
  const double per = H.perimeter();
  const std::size_t n = H.vertices.size();
  double walked = 0.0;
  int k = 0;
  for (std::size_t i = 0; i < n && boundary_samples > 0; ++i) {
    const Point a = H.vertices[i], b = H.vertices[(i + 1) % n];
    const double len = screenlab::distance(a, b);
    for (; k < boundary_samples; ++k) {
      const double s = per * k / boundary_samples - walked;
      if (s > len) break;
      visit(a + (s / len) * (b - a));
    }
    walked += len;
  }
  rep.holds = rep.worst_distance <= r + rep.tolerance;
  return rep;
}

ConvexPolygon clip_to_box(const Wedge& w, Point lo, Point hi) {
  std::vector<Point> box{{lo.x, lo.y}, {hi.x, lo.y}, {hi.x, hi.y}, {lo.x, hi.y}};
  box = clip(box, w.a.normal, w.a.offset);
  box = clip(box, w.b.normal, w.b.offset);
  return ConvexPolygon::make(dedupe(box));
}

}  // namespace screenlab
