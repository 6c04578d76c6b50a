#include "screenlab/constructions.hpp"

#include <algorithm>
#include <cmath>

#include "screenlab/errors.hpp"

namespace screenlab {

namespace {

void require_euclidean(const CostModel& cm, const char* what) {
  if (cm.kind != CostKind::Euclidean)
    throw Error(ErrorCode::MethodUnavailable, std::string(what) + " needs the Euclidean cost");
}

}  // namespace

Point ConstructionResult::marker(const std::string& name) const {
  for (const auto& m : markers)
    if (m.name == name) return m.point;
  throw Error(ErrorCode::UnknownSet, "no marker " + name);
}

double unit_shift(const HalfPlane& h, const CostModel& cm) {
  if (cm.kind == CostKind::Euclidean) return 1.0 / cm.eta;
  const Point start = project_to_boundary(h, {0.0, 0.0});
  auto cost = [&](double d) { return min_cost_into(cm, start, h.shifted(d)).cost; };
  double lo = 0.0, hi = 1.0 / cm.eta;
  while (cost(hi) < 1.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e9) throw Error(ErrorCode::NoMinimizer, "unit shift diverges");
  }
  while (hi - lo > kShiftTol) {
    const double mid = 0.5 * (lo + hi);
    (cost(mid) < 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::pair<HalfPlane, HalfPlane> shifted_tests(const Wedge& H, const CostModel& cm) {
  return {H.a.shifted(unit_shift(H.a, cm)), H.b.shifted(unit_shift(H.b, cm))};
}

StringentMarkers stringent_markers(const Wedge& H, const CostModel& cm) {
  const auto [ap, bp] = shifted_tests(H, cm);
  return {H.apex, boundary_intersection(ap, bp), boundary_intersection(H.b, ap), boundary_intersection(H.a, bp)};
}

HalfPlane bisector_test(const Wedge& H, const CostModel& cm) {
  require_euclidean(cm, "bisector test");
  const auto mk = stringent_markers(H, cm);
  Point n = perp(normalized(mk.O_plus - mk.O));
  if (dot(n, H.b.normal) < 0.0) n = -n;
  return HalfPlane::through(mk.O, n);
}

std::vector<Point> cheap_talk_region(const Wedge& H, const CostModel& cm) {
  const auto mk = stringent_markers(H, cm);
  const Point P = project_to_boundary(H.a, mk.O_plus), Q = project_to_boundary(H.b, mk.O_plus);
  std::vector<Point> region{mk.O, Q, P};
  if (H.theta < 90.0) region = {mk.O, Q, mk.O_plus, P};
  double area = 0.0;
  for (std::size_t i = 0; i < region.size(); ++i) area += cross(region[i], region[(i + 1) % region.size()]);
  if (area < 0.0) std::reverse(region.begin(), region.end());
  return region;
}

CheapTalkMenu cheap_talk_menu(const Wedge& H, const CostModel& cm) {
  require_euclidean(cm, "cheap-talk menu");
  const auto [ap, bp] = shifted_tests(H, cm);
  CheapTalkMenu menu;
  menu.entries.push_back(
      {cheap_talk_region(H, cm), Sequential{bisector_test(H, cm), ap, 1.0, Disclosure::NoDisclose, false}});
  menu.fallback = Sequential{ap, bp, 1.0, Disclosure::NoDisclose, false};
  return menu;
}

ConstructionResult cheap_talk_construction(const Wedge& H, const CostModel& cm) {
  const auto mk = stringent_markers(H, cm);
  return {cheap_talk_menu(H, cm),
          {{"O", mk.O}, {"O+", mk.O_plus}, {"A", mk.A}, {"B", mk.B}, {"P", project_to_boundary(H.a, mk.O_plus)}, {"Q", project_to_boundary(H.b, mk.O_plus)}},
          "reports in the routing region face the bisector test, then the shifted A test",
          true};
}

Simultaneous optimal_simultaneous(const Wedge& H, const CostModel& cm) {
  const auto [ap, bp] = shifted_tests(H, cm);
  return {ap, bp};
}

Sequential optimal_fixed_order(const Wedge& H, const CostModel& cm) {
  const auto [ap, bp] = shifted_tests(H, cm);
  return {ap, bp, 1.0, Disclosure::NoDisclose, false};
}

std::pair<Sequential, Sequential> derived_fixed_orders(const Sequential& m, const Wedge& H) {
  const Point O = boundary_intersection(m.tA, m.tB);
  const HalfPlane a = HalfPlane::through(O, H.a.normal);
  const HalfPlane b = HalfPlane::through(O, H.b.normal);
  return {Sequential{m.tA, b, 1.0, Disclosure::NoDisclose, false},
          Sequential{a, m.tB, 0.0, Disclosure::NoDisclose, false}};
}

Mixture derived_mixture(const Sequential& m, const Wedge& H) {
  const auto [first, second] = derived_fixed_orders(m, H);
  return Mixture{{{first, m.q}, {second, 1.0 - m.q}}};
}

Sequential pii_mechanism(const Wedge& H, const CostModel& cm) {
  require_euclidean(cm, "P_II construction");
  return {H.a, shifted_tests(H, cm).second, 1.0, Disclosure::NoDisclose, false};
}

Sequential pii_mechanism(const Wedge& H, const CostModel& cm, int grad_wA_sign, int grad_wB_sign) {
  if (grad_wA_sign >= 0 && grad_wB_sign <= 0) return pii_mechanism(H, cm);
  if (grad_wA_sign <= 0 && grad_wB_sign >= 0) {
    require_euclidean(cm, "P_II construction");
    return {shifted_tests(H, cm).first, H.b, 0.0, Disclosure::NoDisclose, false};
  }
  throw Error(ErrorCode::MethodUnavailable, "density is not monotone in a usable direction");
}

ConstructionResult investment_random(const Wedge& H) {
  const bool ok = H.theta >= 30.0 - 1e-9;
  return {Sequential{H.a, H.b, 0.5, Disclosure::NoDisclose, false},
          {{"O", H.apex}},
          ok ? "random order without disclosure, angle at least 30 degrees"
             : "random order without disclosure; angle below 30 degrees, no first-best guarantee",
          ok};
}

}  // namespace screenlab
