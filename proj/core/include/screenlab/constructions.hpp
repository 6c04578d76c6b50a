#pragma once

#include <string>
#include <utility>
#include <vector>

#include "screenlab/costs.hpp"
#include "screenlab/geometry.hpp"
#include "screenlab/mechanisms.hpp"

namespace screenlab {

struct Marker {
  std::string name;
  Point point;
};

struct ConstructionResult {
  Mechanism mechanism;
  std::vector<Marker> markers;
  std::string notes;
  bool guarantee = true;

  Point marker(const std::string& name) const;
};

inline constexpr double kShiftTol = 1e-9;

// Distance d such that crossing from h's boundary into h.shifted(d) costs exactly 1.
double unit_shift(const HalfPlane& h, const CostModel& cm);
std::pair<HalfPlane, HalfPlane> shifted_tests(const Wedge& H, const CostModel& cm);

struct StringentMarkers {
  Point O, O_plus, A, B;
};
StringentMarkers stringent_markers(const Wedge& H, const CostModel& cm);

// Boundary through O and O+, oriented so that its normal has a positive w_B component.
HalfPlane bisector_test(const Wedge& H, const CostModel& cm);

// Reports routed to the rotated component: O and the feet P, Q of O+ on the h_A and
// h_B boundaries, plus O+ itself below 90 degrees.
std::vector<Point> cheap_talk_region(const Wedge& H, const CostModel& cm);
CheapTalkMenu cheap_talk_menu(const Wedge& H, const CostModel& cm);
ConstructionResult cheap_talk_construction(const Wedge& H, const CostModel& cm);

Simultaneous optimal_simultaneous(const Wedge& H, const CostModel& cm);
Sequential optimal_fixed_order(const Wedge& H, const CostModel& cm);

// (t_A, h_B', 1) and (h_A', t_B, 0), with h_i' through the announced apex and normal w_i.
std::pair<Sequential, Sequential> derived_fixed_orders(const Sequential& m, const Wedge& H);
Mixture derived_mixture(const Sequential& m, const Wedge& H);

Sequential pii_mechanism(const Wedge& H, const CostModel& cm);
// Orientation matched to the density: its unqualified selections lie on the side
// where the density falls. Signs are those of grad f . w_A and grad f . w_B;
// (+, -) gives (h_A, h_B+, 1), (-, +) gives h_B first then h_A+.
Sequential pii_mechanism(const Wedge& H, const CostModel& cm, int grad_wA_sign, int grad_wB_sign);

ConstructionResult investment_random(const Wedge& H);

}  // namespace screenlab
