#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "screenlab/geometry.hpp"
#include "screenlab/random.hpp"

namespace screenlab {

enum class RegionSet { Astrip, Bstrip, BO, Cq, Dq, Omega, QualifiedWedge, Mq };

RegionSet parse_region_set(const std::string& name);  // throws UnknownSet
std::string to_string(RegionSet s);

// Which boundary rays anchor the strips: the announced tests' own edges, or the
// announced boundary clipped by the true other test.
enum class StripAnchor { Announced, TrueTests };

struct Ray {
  Point origin;
  Point dir;
  bool full_line = false;
  bool empty = false;
};

struct RegionSpec {
  CanonicalFrame frame;
  double theta = 90.0;
  double eta = 1.0;
  double q = 1.0;
  bool quads_empty = false;  // theta >= 90: C_q and D_q are empty
  StripAnchor anchor = StripAnchor::Announced;

  // Canonical-frame markers.
  Point O, Eq, Eq_tilde, Eq_prime, G1q, G1q_tilde, G1q_prime, G, E;
  std::vector<Point> Cq_poly;  // O, E_q, Ẽ_q, E_q'
  std::vector<Point> Dq_poly;  // O, G_{1-q}, G̃_{1-q}, G'_{1-q}

  // Canonical-frame strip rays (edge of the strip, pointing into the strip).
  Ray ray_a;
  Ray ray_b;

  Point to_world(Point canonical) const { return frame.to_world(canonical); }
};

RegionSpec canonical_region_spec(const HalfPlane& tA, const HalfPlane& tB, double q, double eta,
                                 StripAnchor anchor = StripAnchor::Announced,
                                 std::optional<Wedge> true_wedge = std::nullopt);

// p in world coordinates.
bool member(const RegionSpec& spec, RegionSet set, Point p);

using Predicate = std::function<bool(Point)>;

struct InclusionResult {
  bool holds = true;
  std::size_t violations = 0;
  std::vector<Point> violation_witnesses;
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

InclusionResult inclusion_sample(const Predicate& inner, const Predicate& outer, const Sampler& sampler,
                                 std::size_t n, std::uint64_t seed = 1, std::size_t max_witnesses = 16);

// Manipulation set of the no-disclosure procedure (tA, tB, q): strips, B_O, C_q, D_q.
// Largest q with C_q ⊆ D_0 ∪ B_O for an announced angle below 90 degrees:
// 1/(2 cos θ) up to 45 degrees (Ẽ_q reaches G inside D_0), sin θ beyond (Ẽ_q leaves the disc).
double cq_cover_threshold(double theta_deg);
// Smallest q with D_q ⊆ C_1 ∪ B_O; mirror of the above.
inline double dq_cover_threshold(double theta_deg) { return 1.0 - cq_cover_threshold(theta_deg); }

// Default sampler: O-centred square of half-width 3/eta.
Sampler region_box_sampler(const RegionSpec& spec);

}  // namespace screenlab
