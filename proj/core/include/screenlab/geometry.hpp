#pragma once

#include <cmath>
#include <utility>

namespace screenlab {

// Membership slack for closed half-planes: projected points must count as inside.
inline constexpr double kBoundaryTol = 1e-9;
inline constexpr double kParallelTol = 1e-9;
inline constexpr double kPi = 3.14159265358979323846;

struct Point {
  double x = 0.0;
  double y = 0.0;

  Point& operator+=(Point o) { x += o.x; y += o.y; return *this; }
  Point& operator-=(Point o) { x -= o.x; y -= o.y; return *this; }
  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator-(Point a) { return {-a.x, -a.y}; }
  friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend Point operator*(Point a, double s) { return {s * a.x, s * a.y}; }
  friend Point operator/(Point a, double s) { return {a.x / s, a.y / s}; }
  friend bool operator==(Point a, Point b) = default;
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }
inline Point perp(Point a) { return {-a.y, a.x}; }
inline Point normalized(Point a) { return a / norm(a); }
inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

// {p : normal·p >= offset}, normal of unit length.
struct HalfPlane {
  Point normal{1.0, 0.0};
  double offset = 0.0;

  // Normalizes (n, b) so that the satisfied set is unchanged.
  static HalfPlane make(Point n, double b);
  static HalfPlane through(Point p, Point n);

  bool satisfies(Point p, double tol = kBoundaryTol) const {
    return dot(normal, p) - offset >= -tol;
  }
  // Moves the boundary by d along the normal (d > 0 makes the test stricter).
  HalfPlane shifted(double d) const { return {normal, offset + d}; }
  Point direction() const { return perp(normal); }
  Point anchor() const { return offset * normal; }
};

double signed_margin(const HalfPlane& h, Point p);
Point project_to_boundary(const HalfPlane& h, Point p);
Point project_into(const HalfPlane& h, Point p);
Point reflect(const HalfPlane& h, Point p);
// Intersection of the two boundary lines; the caller guarantees non-parallel lines.
Point boundary_intersection(const HalfPlane& a, const HalfPlane& b);

struct Wedge {
  HalfPlane a;
  HalfPlane b;
  Point apex;
  double theta = 90.0;  // interior angle, degrees

  bool contains(Point p, double tol = kBoundaryTol) const {
    return a.satisfies(p, tol) && b.satisfies(p, tol);
  }
  // Unit direction of the edge on a's boundary (points into b), and vice versa.
  Point ray_a() const;
  Point ray_b() const;
};

Wedge wedge_from(const HalfPlane& a, const HalfPlane& b);

std::pair<Point, double> closest_point_in_wedge(const Wedge& w, Point p);

double distance_to_ray(Point p, Point origin, Point direction);

// Rigid map taking the apex to the origin, w_A to (1,0) and w_B to (-cos t, sin t).
struct CanonicalFrame {
  double m[2][2] = {{1.0, 0.0}, {0.0, 1.0}};
  Point translation;
  double theta = 90.0;

  Point to_canonical(Point p) const;
  Point to_world(Point p) const;
  Point vector_to_canonical(Point v) const;
  Point vector_to_world(Point v) const;
};

CanonicalFrame canonical_frame(const Wedge& w);

// Wedge in canonical position: apex at origin, h_A = {x >= 0}.
Wedge canonical_wedge(double theta_deg, Point apex = {0.0, 0.0}, double rotation_deg = 0.0);

}  // namespace screenlab
