#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "screenlab/best_response.hpp"
#include "screenlab/costs.hpp"
#include "screenlab/geometry.hpp"
#include "screenlab/mechanisms.hpp"
#include "screenlab/random.hpp"

namespace screenlab {

enum class Objective { PI, PII };
enum class FeasibilityMethod { Analytic, MonteCarlo };

std::string to_string(Objective o);

struct UniformBox {
  Point lo;
  Point hi;
};

struct GaussianComponent {
  double weight = 1.0;
  Point mean;
  double sx = 1.0;
  double sy = 1.0;
};

struct GaussianMixture {
  std::vector<GaussianComponent> components;
};

// Piecewise-constant density on nx * ny cells, weights row-major (iy * nx + ix).
struct GridDensity {
  Point origin;
  double cell = 1.0;
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::vector<double> weights;
  std::vector<double> cumulative;

  // Weights from f evaluated at cell centres, normalized to sum 1.
  static GridDensity from_function(Point origin, double cell, std::size_t nx, std::size_t ny,
                                   const std::function<double(Point)>& f);
  static GridDensity from_weights(Point origin, double cell, std::size_t nx, std::size_t ny,
                                  std::vector<double> weights);
};

// Signs of grad f · w_A and grad f · w_B (0 = unknown or mixed).
struct Monotonicity {
  int grad_dot_wA_sign = 0;
  int grad_dot_wB_sign = 0;
};

struct Distribution {
  std::variant<UniformBox, GaussianMixture, GridDensity> kind;
  std::optional<Monotonicity> monotonicity;

  static Distribution uniform(Point lo, Point hi);
  static Distribution point_mass(Point p) { return uniform(p, p); }

  double pdf(Point p) const;
  Point sample(Rng& rng) const;
  Sampler sampler() const;
};

// Finite-difference signs of the grid density's gradient along w_A and w_B.
Monotonicity grid_monotonicity(const GridDensity& g, const Wedge& H);

struct Estimate {
  double value = 0.0;
  double se = 0.0;
};

struct Witness {
  Point type;
  Order order = Order::AFirst;
};

struct EvalReport {
  Objective objective = Objective::PI;
  Setting setting = Setting::Manipulation;
  Estimate p_qualified_selected;
  Estimate p_unqualified_selected;
  bool feasible = true;
  std::optional<Witness> infeasibility_witness;
  std::size_t qualified_missed = 0;  // qualified samples accepted with probability < 1
  Estimate first_best;
  double first_best_gap = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

EvalReport evaluate(const Mechanism& m, const Wedge& H, const Distribution& dist, Setting setting,
                    const CostModel& cm, Objective objective, std::size_t n, std::uint64_t seed = 1);

struct FeasibilityResult {
  bool feasible = true;
  FeasibilityMethod method = FeasibilityMethod::Analytic;
  std::optional<Witness> witness;
  std::string reason;
};

// Analytic: extreme points of the accepted set against H (Euclidean cost only,
// throws MethodUnavailable otherwise). MC: searches `sampler` (default: square of
// half-width 3/eta around H's apex) for a selected unqualified type.
FeasibilityResult feasibility(const Mechanism& m, const Wedge& H, Setting setting, const CostModel& cm,
                              FeasibilityMethod method, std::size_t n = 100000, std::uint64_t seed = 1,
                              const Sampler& sampler = {});

// Whether every type in H is accepted by the simultaneous tests (tA, tB).
bool pii_feasible_analytic(const Simultaneous& m, const Wedge& H, const CostModel& cm);

Estimate first_best(const Distribution& dist, const Wedge& H, const CostModel& cm, std::size_t n,
                     std::uint64_t seed = 1);

struct DominanceResult {
  bool a_geq_b = true;
  bool b_geq_a = true;
  std::vector<Point> a_below_b;  // witnesses where A accepts with lower probability
  std::vector<Point> b_below_a;
  std::size_t a_below_count = 0;
  std::size_t b_below_count = 0;
  std::size_t n = 0;
  std::uint64_t seed = 0;

  std::string relation() const;
};

inline constexpr double kDominanceTol = 1e-9;

DominanceResult dominance_compare(const Mechanism& a, const Mechanism& b, const Sampler& sampler,
                                  Setting setting, const CostModel& cm, std::size_t n,
                                  std::uint64_t seed = 1, std::size_t max_witnesses = 16);

}  // namespace screenlab
