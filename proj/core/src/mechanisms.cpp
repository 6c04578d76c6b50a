#include "screenlab/mechanisms.hpp"

#include <cmath>
#include <sstream>

#include "overloaded.hpp"
#include "screenlab/errors.hpp"

namespace screenlab {

namespace {

using detail::overloaded;

void check_tests(const HalfPlane& a, const HalfPlane& b, bool degenerate, const std::string& where,
                 std::vector<std::string>& errors) {
  for (const HalfPlane* h : {&a, &b}) {
    if (std::abs(norm(h->normal) - 1.0) > 1e-12) errors.push_back(where + ": normal not unit length");
    if (!std::isfinite(h->offset)) errors.push_back(where + ": non-finite offset");
  }
  if (!degenerate && std::abs(cross(a.normal, b.normal)) <= kParallelTol)
    errors.push_back(where + ": parallel boundaries");
}

void check_sequential(const Sequential& s, const std::string& where, std::vector<std::string>& errors) {
  check_tests(s.tA, s.tB, s.degenerate, where, errors);
  if (!(s.q >= 0.0 && s.q <= 1.0)) {
    std::ostringstream os;
    os << where << ": q out of range (" << s.q << ")";
    errors.push_back(os.str());
  }
}

void check_leaf(const Leaf& leaf, const std::string& where, std::vector<std::string>& errors) {
  std::visit(overloaded{[&](const Simultaneous& s) { check_tests(s.tA, s.tB, false, where, errors); },
                        [&](const Sequential& s) { check_sequential(s, where, errors); }},
             leaf);
}

}  // namespace

const Sequential& CheapTalkMenu::assign(Point message) const {
  const int i = entry_index(message);
  return i < 0 ? fallback : entries[static_cast<std::size_t>(i)].mechanism;
}

int CheapTalkMenu::entry_index(Point message) const {
  for (std::size_t i = 0; i < entries.size(); ++i)
    if (point_in_convex(entries[i].region, message, 0.0)) return static_cast<int>(i);
  return -1;
}

bool point_in_convex(const std::vector<Point>& poly, Point p, double tol) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = poly[i], b = poly[(i + 1) % n];
    const Point e = b - a;
    if (cross(e, p - a) < -tol * norm(e)) return false;
  }
  return true;
}

ValidationResult validate(const Mechanism& m) {
  ValidationResult r;
  std::visit(overloaded{
                 [&](const Simultaneous& s) { check_tests(s.tA, s.tB, false, "simultaneous", r.errors); },
                 [&](const Sequential& s) {
                   check_sequential(s, "sequential", r.errors);
                   r.fixed_order = s.fixed_order();
                 },
                 [&](const Mixture& mix) {
                   double total = 0.0;
                   for (std::size_t i = 0; i < mix.components.size(); ++i) {
                     const auto& c = mix.components[i];
                     check_leaf(c.mechanism, "component " + std::to_string(i), r.errors);
                     if (c.prob < 0.0) r.errors.push_back("component " + std::to_string(i) + ": negative probability");
                     total += c.prob;
                   }
                   if (mix.components.empty()) r.errors.push_back("mixture has no components");
                   if (std::abs(total - 1.0) > 1e-12) {
                     std::ostringstream os;
                     os << "probabilities sum " << total;
                     r.errors.push_back(os.str());
                   }
                 },
                 [&](const CheapTalkMenu& menu) {
                   check_sequential(menu.fallback, "menu fallback", r.errors);
                   for (std::size_t i = 0; i < menu.entries.size(); ++i) {
                     check_sequential(menu.entries[i].mechanism, "menu entry " + std::to_string(i), r.errors);
                     if (menu.entries[i].region.size() < 3)
                       r.errors.push_back("menu entry " + std::to_string(i) + ": region needs 3 vertices");
                   }
                 }},
             m);
  r.ok = r.errors.empty();
  return r;
}

bool acceptance_outcome(const Leaf& m, const Strategy& s, Order realized_first) {
  if (std::holds_alternative<Abstain>(s)) return false;
  if (const auto* sim = std::get_if<Simultaneous>(&m)) {
    const auto* one = std::get_if<OneStep>(&s);
    if (!one) throw Error(ErrorCode::IncompatibleStrategy, "simultaneous tests observe one point");
    return sim->tA.satisfies(one->y) && sim->tB.satisfies(one->y);
  }
  const auto& seq = std::get<Sequential>(m);
  const HalfPlane& first = realized_first == Order::AFirst ? seq.tA : seq.tB;
  const HalfPlane& second = realized_first == Order::AFirst ? seq.tB : seq.tA;
  Point x1, x2;
  if (const auto* one = std::get_if<OneStep>(&s)) {
    x1 = x2 = one->y;
  } else if (const auto* two = std::get_if<TwoStep>(&s)) {
    x1 = two->x1;
    x2 = two->x2;
  } else {
    const auto& cond = std::get<ConditionalTwoStep>(s);
    if (seq.disclosure != Disclosure::Disclose)
      throw Error(ErrorCode::IncompatibleStrategy, "conditional strategy needs disclosure");
    x1 = cond.x1;
    x2 = realized_first == Order::AFirst ? cond.x2_if_A_first : cond.x2_if_B_first;
  }
  return first.satisfies(x1) && second.satisfies(x2);
}

double acceptance_prob(const Leaf& m, const Strategy& s) {
  if (std::holds_alternative<Simultaneous>(m)) return acceptance_outcome(m, s, Order::AFirst) ? 1.0 : 0.0;
  const double q = std::get<Sequential>(m).q;
  double p = 0.0;
  if (q > 0.0 && acceptance_outcome(m, s, Order::AFirst)) p += q;
  if (q < 1.0 && acceptance_outcome(m, s, Order::BFirst)) p += 1.0 - q;
  return p;
}

double acceptance_prob(const Mechanism& m, const Strategy& s, std::optional<Point> message) {
  return std::visit(overloaded{[&](const Simultaneous& x) { return acceptance_prob(Leaf{x}, s); },
                               [&](const Sequential& x) { return acceptance_prob(Leaf{x}, s); },
                               [&](const Mixture& mix) {
                                 double p = 0.0;
                                 for (const auto& c : mix.components) p += c.prob * acceptance_prob(c.mechanism, s);
                                 return p;
                               },
                               [&](const CheapTalkMenu& menu) {
                                 if (!message)
                                   throw Error(ErrorCode::IncompatibleStrategy, "menu needs a reported message");
                                 return acceptance_prob(Leaf{menu.assign(*message)}, s);
                               }},
                    m);
}

std::string to_string(Disclosure d) { return d == Disclosure::Disclose ? "disclose" : "none"; }
std::string to_string(Setting s) { return s == Setting::Manipulation ? "manipulation" : "investment"; }
std::string to_string(Order o) { return o == Order::AFirst ? "A-first" : "B-first"; }

std::string strategy_kind(const Strategy& s) {
  return std::visit(overloaded{[](const OneStep&) { return std::string("one-step"); },
                               [](const TwoStep&) { return std::string("two-step"); },
                               [](const ConditionalTwoStep&) { return std::string("conditional-two-step"); },
                               [](const Abstain&) { return std::string("abstain"); }},
                    s);
}

}  // namespace screenlab
