#include "screenlab/geometry.hpp"

#include <algorithm>
#include <sstream>

#include "screenlab/errors.hpp"

namespace screenlab {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParallelBoundaries: return "ParallelBoundaries";
    case ErrorCode::NoMinimizer: return "NoMinimizer";
    case ErrorCode::IncompatibleStrategy: return "IncompatibleStrategy";
    case ErrorCode::ThetaOutOfRange: return "ThetaOutOfRange";
    case ErrorCode::UnknownSet: return "UnknownSet";
    case ErrorCode::MethodUnavailable: return "MethodUnavailable";
    case ErrorCode::EmptyRegion: return "EmptyRegion";
    case ErrorCode::UnknownSuite: return "UnknownSuite";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

HalfPlane HalfPlane::make(Point n, double b) {
  const double len = norm(n);
  return {n / len, b / len};
}

HalfPlane HalfPlane::through(Point p, Point n) {
  const Point u = normalized(n);
  return {u, dot(u, p)};
}

double signed_margin(const HalfPlane& h, Point p) { return dot(h.normal, p) - h.offset; }

Point project_to_boundary(const HalfPlane& h, Point p) {
  return p - signed_margin(h, p) * h.normal;
}

Point project_into(const HalfPlane& h, Point p) {
  const double m = signed_margin(h, p);
  return m >= 0.0 ? p : p - m * h.normal;
}

Point reflect(const HalfPlane& h, Point p) { return p - 2.0 * signed_margin(h, p) * h.normal; }

Point boundary_intersection(const HalfPlane& a, const HalfPlane& b) {
  const double det = cross(a.normal, b.normal);
  return {(a.offset * b.normal.y - b.offset * a.normal.y) / det,
          (a.normal.x * b.offset - b.normal.x * a.offset) / det};
}

Point Wedge::ray_a() const {
  Point d = a.direction();
  return dot(b.normal, d) >= 0.0 ? d : -d;
}

Point Wedge::ray_b() const {
  Point d = b.direction();
  return dot(a.normal, d) >= 0.0 ? d : -d;
}

Wedge wedge_from(const HalfPlane& a, const HalfPlane& b) {
  const double s = cross(a.normal, b.normal);
  if (std::abs(s) <= kParallelTol) {
    std::ostringstream os;
    os << "|sin| = " << std::abs(s);
    throw Error(ErrorCode::ParallelBoundaries, os.str());
  }
  Wedge w{a, b, boundary_intersection(a, b), 0.0};
  const double c = std::clamp(dot(w.ray_a(), w.ray_b()), -1.0, 1.0);
  w.theta = rad2deg(std::acos(c));
  return w;
}

std::pair<Point, double> closest_point_in_wedge(const Wedge& w, Point p) {
  if (w.contains(p, 0.0)) return {p, 0.0};
  Point best = w.apex;
  double best_d = distance(p, w.apex);
  // Convex cone: the optimum is an edge projection that stays feasible, or the apex.
  for (const auto* pair : {&w.a, &w.b}) {
    const HalfPlane& own = *pair;
    const HalfPlane& other = (pair == &w.a) ? w.b : w.a;
    const Point c = project_to_boundary(own, p);
    if (signed_margin(other, c) >= 0.0) {
      const double d = distance(p, c);
      if (d < best_d) {
        best = c;
        best_d = d;
      }
    }
  }
  return {best, best_d};
}

double distance_to_ray(Point p, Point origin, Point direction) {
  const double t = std::max(0.0, dot(p - origin, direction));
  return distance(p, origin + t * direction);
}

Point CanonicalFrame::vector_to_canonical(Point v) const {
  return {m[0][0] * v.x + m[0][1] * v.y, m[1][0] * v.x + m[1][1] * v.y};
}

Point CanonicalFrame::vector_to_world(Point v) const {
  return {m[0][0] * v.x + m[1][0] * v.y, m[0][1] * v.x + m[1][1] * v.y};
}

Point CanonicalFrame::to_canonical(Point p) const { return vector_to_canonical(p - translation); }

Point CanonicalFrame::to_world(Point p) const { return vector_to_world(p) + translation; }

CanonicalFrame canonical_frame(const Wedge& w) {
  CanonicalFrame f;
  const Point u = w.a.normal;
  // Rotation taking u to (1,0).
  f.m[0][0] = u.x;
  f.m[0][1] = u.y;
  f.m[1][0] = -u.y;
  f.m[1][1] = u.x;
  if (f.vector_to_canonical(w.b.normal).y < 0.0) {
    f.m[1][0] = -f.m[1][0];
    f.m[1][1] = -f.m[1][1];
  }
  f.translation = w.apex;
  f.theta = w.theta;
  return f;
}

Wedge canonical_wedge(double theta_deg, Point apex, double rotation_deg) {
  const double t = deg2rad(theta_deg);
  const double r = deg2rad(rotation_deg);
  auto rot = [&](Point v) {
    return Point{std::cos(r) * v.x - std::sin(r) * v.y, std::sin(r) * v.x + std::cos(r) * v.y};
  };
  const HalfPlane a = HalfPlane::through(apex, rot({1.0, 0.0}));
  const HalfPlane b = HalfPlane::through(apex, rot({-std::cos(t), std::sin(t)}));
  return wedge_from(a, b);
}

}  // namespace screenlab
