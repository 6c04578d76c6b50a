#include "screenlab/regions.hpp"

#include <algorithm>
#include <cmath>

#include "screenlab/errors.hpp"
#include "screenlab/mechanisms.hpp"
#include "screenlab/parallel.hpp"

namespace screenlab {

namespace {

constexpr double kTol = 1e-9;

struct NamedSet {
  const char* name;
  RegionSet set;
};
constexpr NamedSet kNames[] = {
    {"Astrip", RegionSet::Astrip}, {"Bstrip", RegionSet::Bstrip}, {"BO", RegionSet::BO},
    {"Cq", RegionSet::Cq},         {"Dq", RegionSet::Dq},         {"Omega", RegionSet::Omega},
    {"QualifiedWedge", RegionSet::QualifiedWedge}, {"Mq", RegionSet::Mq}};

std::vector<Point> ccw(std::vector<Point> poly) {
  double area = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) area += cross(poly[i], poly[(i + 1) % poly.size()]);
  if (area < 0.0) std::reverse(poly.begin(), poly.end());
  return poly;
}

// Boundary line through the origin with direction `dir`, clipped by the true test h.
Ray clip_ray(Point dir, const HalfPlane& h) {
  const double slope = dot(h.normal, dir);
  if (std::abs(slope) < kParallelTol) {
    Ray r{{0.0, 0.0}, dir, true, false};
    r.empty = -h.offset < 0.0;
    return r;
  }
  const double t0 = h.offset / slope;
  return {t0 * dir, slope > 0.0 ? dir : -dir, false, false};
}

bool in_wedge(const RegionSpec& s, Point p) {
  const double c = std::cos(deg2rad(s.theta)), sn = std::sin(deg2rad(s.theta));
  return p.x >= -kTol && -c * p.x + sn * p.y >= -kTol;
}

bool in_strip(const Ray& ray, double margin, double reach, Point p) {
  if (ray.empty) return false;
  if (!ray.full_line && dot(p - ray.origin, ray.dir) < -kTol) return false;
  return margin >= -reach - kTol && margin <= kTol;
}

bool in_quad(const std::vector<Point>& poly, Point p) {
  double extent = 0.0;
  for (Point v : poly) extent = std::max(extent, norm(v - poly.front()));
  if (extent <= kTol) return norm(p - poly.front()) <= kTol;
  return point_in_convex(poly, p, kTol);
}

bool canonical_member(const RegionSpec& s, RegionSet set, Point p) {
  const double c = std::cos(deg2rad(s.theta)), sn = std::sin(deg2rad(s.theta));
  const double r = 1.0 / s.eta;
  auto strip_a = [&] { return !in_wedge(s, p) && in_strip(s.ray_a, p.x, r, p); };
  auto strip_b = [&] { return !in_wedge(s, p) && in_strip(s.ray_b, -c * p.x + sn * p.y, r, p); };
  auto omega = [&] { return !in_wedge(s, p) && !strip_a() && !strip_b(); };
  auto quad_c = [&] { return !s.quads_empty && in_quad(s.Cq_poly, p); };
  auto quad_d = [&] { return !s.quads_empty && in_quad(s.Dq_poly, p); };
  auto disc = [&] { return norm(p) <= r + kTol && omega(); };
  switch (set) {
    case RegionSet::QualifiedWedge: return in_wedge(s, p);
    case RegionSet::Astrip: return strip_a();
    case RegionSet::Bstrip: return strip_b();
    case RegionSet::Omega: return omega();
    case RegionSet::BO: return disc();
    case RegionSet::Cq: return quad_c();
    case RegionSet::Dq: return quad_d();
    case RegionSet::Mq: return strip_a() || strip_b() || quad_c() || quad_d() || disc();
  }
  return false;
}

}  // namespace

RegionSet parse_region_set(const std::string& name) {
  for (const auto& n : kNames)
    if (name == n.name) return n.set;
  throw Error(ErrorCode::UnknownSet, name);
}

std::string to_string(RegionSet s) {
  for (const auto& n : kNames)
    if (n.set == s) return n.name;
  return "unknown";
}

RegionSpec canonical_region_spec(const HalfPlane& tA, const HalfPlane& tB, double q, double eta,
                                 StripAnchor anchor, std::optional<Wedge> true_wedge) {
  const Wedge w = wedge_from(tA, tB);
  RegionSpec s;
  s.frame = canonical_frame(w);
  s.theta = w.theta;
  s.eta = eta;
  s.q = q;
  s.anchor = anchor;
  s.quads_empty = w.theta >= 90.0;
  const double th = deg2rad(w.theta);
  const double c = std::cos(th), sn = std::sin(th), r = 1.0 / eta;
  const Point wB{-c, sn};
  s.O = {0.0, 0.0};
  s.Eq = -(q * r) * wB;
  s.Eq_tilde = {0.0, -q * r / sn};
  s.Eq_prime = {-s.Eq.x, s.Eq.y};
  s.G1q = {-(1.0 - q) * r, 0.0};
  s.G1q_tilde = {-(1.0 - q) * r, -(1.0 - q) * r / std::tan(th)};
  s.G1q_prime = s.G1q - 2.0 * dot(wB, s.G1q) * wB;
  s.G = {0.0, -r / std::sin(2.0 * th)};
  s.E = {-r / (2.0 * c), -r / (2.0 * sn)};
  s.Cq_poly = ccw({s.O, s.Eq, s.Eq_tilde, s.Eq_prime});
  s.Dq_poly = ccw({s.O, s.G1q, s.G1q_tilde, s.G1q_prime});

  const Point dir_a{0.0, 1.0}, dir_b{sn, c};
  s.ray_a = {s.O, dir_a, false, false};
  s.ray_b = {s.O, dir_b, false, false};
  if (anchor == StripAnchor::TrueTests && true_wedge) {
    auto to_canon = [&](const HalfPlane& h) {
      return HalfPlane{s.frame.vector_to_canonical(h.normal), h.offset - dot(h.normal, s.frame.translation)};
    };
    s.ray_a = clip_ray(dir_a, to_canon(true_wedge->b));
    s.ray_b = clip_ray(dir_b, to_canon(true_wedge->a));
  }
  return s;
}

bool member(const RegionSpec& spec, RegionSet set, Point p) {
  return canonical_member(spec, set, spec.frame.to_canonical(p));
}

InclusionResult inclusion_sample(const Predicate& inner, const Predicate& outer, const Sampler& sampler,
                                 std::size_t n, std::uint64_t seed, std::size_t max_witnesses) {
  std::vector<std::vector<Point>> hits(chunk_count(n));
  parallel_chunks(n, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng = Rng::stream(seed, i);
      const Point p = sampler(rng);
      if (inner(p) && !outer(p)) hits[chunk].push_back(p);
    }
  });
  InclusionResult r;
  r.n = n;
  r.seed = seed;
  for (const auto& h : hits)
    for (Point p : h) {
      ++r.violations;
      if (r.violation_witnesses.size() < max_witnesses) r.violation_witnesses.push_back(p);
    }
  r.holds = r.violations == 0;
  return r;
}

double cq_cover_threshold(double theta_deg) {
  const double th = deg2rad(theta_deg);
  return std::min(1.0, theta_deg <= 45.0 ? 1.0 / (2.0 * std::cos(th)) : std::sin(th));
}

Sampler region_box_sampler(const RegionSpec& spec) {
  return centered_sampler(spec.frame.translation, 3.0 / spec.eta);
}

}  // namespace screenlab
