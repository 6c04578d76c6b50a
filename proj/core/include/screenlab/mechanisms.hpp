#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "screenlab/geometry.hpp"

namespace screenlab {

enum class Disclosure { Disclose, NoDisclose };
enum class Setting { Manipulation, Investment };
enum class Order { AFirst, BFirst };

struct Simultaneous {
  HalfPlane tA;
  HalfPlane tB;
};

// tA is the first test with probability q.
struct Sequential {
  HalfPlane tA;
  HalfPlane tB;
  double q = 1.0;
  Disclosure disclosure = Disclosure::NoDisclose;
  bool degenerate = false;  // allows parallel boundaries

  bool fixed_order() const { return q == 0.0 || q == 1.0; }
};

// Mixture components are leaves; nesting mixtures buys nothing since the draw is announced.
using Leaf = std::variant<Simultaneous, Sequential>;

struct MixtureComponent {
  Leaf mechanism;
  double prob = 1.0;
};

struct Mixture {
  std::vector<MixtureComponent> components;
};

struct MenuEntry {
  std::vector<Point> region;  // convex, counterclockwise
  Sequential mechanism;
};

// The announced sequential procedure depends on the reported type.
struct CheapTalkMenu {
  std::vector<MenuEntry> entries;
  Sequential fallback;

  const Sequential& assign(Point message) const;
  int entry_index(Point message) const;  // -1 for the fallback
};

using Mechanism = std::variant<Simultaneous, Sequential, Mixture, CheapTalkMenu>;

struct OneStep {
  Point y;
};
struct TwoStep {
  Point x1;
  Point x2;
};
struct ConditionalTwoStep {
  Point x1;
  Point x2_if_A_first;
  Point x2_if_B_first;
};
struct Abstain {};

using Strategy = std::variant<OneStep, TwoStep, ConditionalTwoStep, Abstain>;

struct ValidationResult {
  bool ok = true;
  bool fixed_order = false;
  std::vector<std::string> errors;
};

ValidationResult validate(const Mechanism& m);

bool acceptance_outcome(const Leaf& m, const Strategy& s, Order realized_first);
double acceptance_prob(const Leaf& m, const Strategy& s);
inline double acceptance_prob(const Sequential& m, const Strategy& s) { return acceptance_prob(Leaf{m}, s); }
inline double acceptance_prob(const Simultaneous& m, const Strategy& s) { return acceptance_prob(Leaf{m}, s); }
// Mixtures apply the same strategy to every announced component; menus need the
// reported message.
double acceptance_prob(const Mechanism& m, const Strategy& s,
                       std::optional<Point> message = std::nullopt);

bool point_in_convex(const std::vector<Point>& poly, Point p, double tol = kBoundaryTol);

std::string to_string(Disclosure d);
std::string to_string(Setting s);
std::string to_string(Order o);
std::string strategy_kind(const Strategy& s);

}  // namespace screenlab
