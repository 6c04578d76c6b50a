#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "screenlab/costs.hpp"
#include "screenlab/mechanisms.hpp"
#include "screenlab/random.hpp"

namespace screenlab {

// Utility ties within this band resolve to participation, then higher
// acceptance probability, then lower cost.
inline constexpr double kTieTol = 1e-12;

struct Branch {
  std::size_t component = 0;  // mixture component or menu entry
  Order order = Order::AFirst;
  double weight = 1.0;
  bool accepted = false;
  Point final_point;
};

struct BestResponse {
  Point type;
  Strategy strategy = Abstain{};
  std::string strategy_class = "abstain";
  double total_expected_cost = 0.0;
  double acceptance_prob = 0.0;
  double expected_utility = 0.0;
  Point final_if_A_first;
  Point final_if_B_first;
  std::vector<Branch> branches;
  std::vector<BestResponse> components;  // per mixture component / the assigned menu entry
};

struct ZigZag {
  TwoStep path;
  double cost = 0.0;
};

// Reflection closed form for "pass `first`, then `second`". nullopt means the
// zig-zag degenerates (x strictly inside `first`, or the reflected projection
// already satisfies `first`), in which case a straight move is at least as cheap.
std::optional<ZigZag> zigzag_two_step(Point x, const HalfPlane& first, const HalfPlane& second,
                                      const CostModel& cm);

// Cheapest path x -> x1 in `first` -> x2 in `second` (exact for Euclidean and
// weighted norms, numeric for custom metrics).
struct SequentialPath {
  Point x1;
  Point x2;
  double cost = 0.0;
};
SequentialPath cheapest_sequential_path(Point x, const HalfPlane& first, const HalfPlane& second,
                                        const CostModel& cm);

struct Continuation {
  double value = 0.0;
  Point x2;
};
Continuation continuation_value(Point x1, const HalfPlane& realized_second, const CostModel& cm);

struct Candidate {
  Strategy strategy;
  std::string label;
  double prob = 0.0;
  double cost = 0.0;
  double utility = 0.0;
  bool genuine_two_step = false;
};

// Every strategy class the solver compares, evaluated exactly.
std::vector<Candidate> strategy_candidates(Point x, const Leaf& m, const CostModel& cm);

BestResponse best_response(Point x, const Leaf& m, Setting setting, const CostModel& cm);
BestResponse best_response(Point x, const Mechanism& m, Setting setting, const CostModel& cm);
inline BestResponse best_response(Point x, const Sequential& m, Setting setting, const CostModel& cm) {
  return best_response(x, Leaf{m}, setting, cm);
}
inline BestResponse best_response(Point x, const Simultaneous& m, Setting setting, const CostModel& cm) {
  return best_response(x, Leaf{m}, setting, cm);
}

Point final_attributes(const BestResponse& br, Order realized_first);

struct ConditionOReport {
  bool holds = true;
  std::vector<Point> witnesses;
  std::size_t witness_count = 0;
  double worst_gap = 0.0;  // best two-step utility minus best one-step utility
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

inline constexpr double kConditionOTol = 1e-9;

ConditionOReport condition_o_check(const Sequential& m, const CostModel& cm, const Sampler& sampler,
                                   std::size_t n, std::uint64_t seed = 1,
                                   std::size_t max_witnesses = 16);

}  // namespace screenlab
