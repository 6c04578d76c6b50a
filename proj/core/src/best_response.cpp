#include "screenlab/best_response.hpp"

#include <algorithm>
#include <cmath>

#include "overloaded.hpp"
#include "screenlab/errors.hpp"
#include "screenlab/parallel.hpp"

namespace screenlab {

using detail::overloaded;

namespace {

// argmin over x1 in `first` of |x - x1| + lambda * d(x1, second), lambda in [0, 1].
// The objective is convex; off `first` the optimum sits on its boundary line,
// where it is a convex function of the arc parameter with one breakpoint.
Point best_first_point(Point x, const HalfPlane& first, const HalfPlane& second, double lambda) {
  const double mx = signed_margin(first, x);
  if (mx >= 0.0) return x;
  const double h = -mx;
  const Point foot = project_to_boundary(first, x);
  const Point d = first.direction();
  const double k = dot(second.normal, d);
  const double m0 = signed_margin(second, foot);
  auto g = [&](double s) {
    return std::hypot(h, s) + lambda * std::max(0.0, -(m0 + s * k));
  };
  double best_s = 0.0;
  double best_g = g(0.0);
  auto consider = [&](double s) {
    const double v = g(s);
    if (v < best_g) {
      best_g = v;
      best_s = s;
    }
  };
  const double lk = lambda * k;
  if (std::abs(lk) < 1.0) {
    const double s_stat = lk * h / std::sqrt(1.0 - lk * lk);
    if (m0 + s_stat * k < 0.0) consider(s_stat);
  }
  if (std::abs(k) > kParallelTol) consider(-m0 / k);
  return foot + best_s * d;
}

// Numeric counterpart for custom metrics.
Point numeric_first_point(Point x, const HalfPlane& first, const HalfPlane& second, double lambda,
                          const CostModel& cm) {
  if (first.satisfies(x, 0.0)) return x;
  const Point foot = project_to_boundary(first, x);
  const Point d = first.direction();
  auto f = [&](double t) {
    const Point p = foot + t * d;
    return one_step_cost(cm, x, p) + lambda * min_cost_into(cm, p, second).cost;
  };
  const int samples = std::max(101, cm.sweep_points / 8);
  const auto [t, v] = detail::sweep_min(f, -cm.search_radius, cm.search_radius, samples, false, false);
  (void)v;
  return foot + t * d;
}

struct Evaluated {
  double prob = 0.0;
  double cost = 0.0;
  bool genuine = false;
};

Evaluated evaluate(Point x, const Leaf& m, const Strategy& s, const CostModel& cm) {
  Evaluated e;
  e.prob = acceptance_prob(m, s);
  std::visit(overloaded{[&](const OneStep& o) { e.cost = one_step_cost(cm, x, o.y); },
                        [&](const TwoStep& t) {
                          e.cost = path_cost(cm, x, t.x1, t.x2);
                          e.genuine = !(t.x1 == t.x2);
                        },
                        [&](const ConditionalTwoStep& c) {
                          const auto& seq = std::get<Sequential>(m);
                          const double w[2] = {seq.q, 1.0 - seq.q};
                          const HalfPlane* first[2] = {&seq.tA, &seq.tB};
                          const Point x2[2] = {c.x2_if_A_first, c.x2_if_B_first};
                          for (int o = 0; o < 2; ++o) {
                            if (w[o] <= 0.0) continue;
                            if (first[o]->satisfies(c.x1)) {
                              e.cost += w[o] * path_cost(cm, x, c.x1, x2[o]);
                              if (!(x2[o] == c.x1)) e.genuine = true;
                            } else {
                              e.cost += w[o] * one_step_cost(cm, x, c.x1);
                            }
                          }
                        },
                        [&](const Abstain&) {}},
             s);
  return e;
}

Candidate make_candidate(Point x, const Leaf& m, Strategy s, std::string label, const CostModel& cm) {
  if (const auto* t = std::get_if<TwoStep>(&s); t && t->x1 == t->x2) {
    s = OneStep{t->x1};
    label = "one-step";
  }
  if (const auto* c = std::get_if<ConditionalTwoStep>(&s);
      c && c->x2_if_A_first == c->x1 && c->x2_if_B_first == c->x1) {
    s = OneStep{c->x1};
    label = "one-step";
  }
  const Evaluated e = evaluate(x, m, s, cm);
  Candidate c{std::move(s), std::move(label), e.prob, e.cost, e.prob - e.cost, e.genuine};
  return c;
}

bool better(const Candidate& a, const Candidate& b) {
  if (a.utility > b.utility + kTieTol) return true;
  if (b.utility > a.utility + kTieTol) return false;
  if (a.prob > b.prob + kTieTol) return true;
  if (b.prob > a.prob + kTieTol) return false;
  return a.cost < b.cost;
}

Point closest_in_both(Point x, const HalfPlane& a, const HalfPlane& b, const CostModel& cm) {
  if (std::abs(cross(a.normal, b.normal)) <= kParallelTol) {
    // Parallel tests: the stricter one decides (or the region is a strip).
    Point p = project_into(a, x);
    p = project_into(b, p);
    return p;
  }
  return min_cost_into(cm, x, wedge_from(a, b)).point;
}

SequentialPath normalize(Point x, const HalfPlane& first, SequentialPath p, const CostModel& cm) {
  if (!(p.x1 == p.x2) && first.satisfies(p.x2)) {
    const double direct = one_step_cost(cm, x, p.x2);
    if (direct <= p.cost) return {p.x2, p.x2, direct};
  }
  return p;
}

ConditionalTwoStep conditional_from(Point x1, const Sequential& seq, const CostModel& cm) {
  ConditionalTwoStep c{x1, x1, x1};
  if (seq.q > 0.0 && seq.tA.satisfies(x1)) c.x2_if_A_first = continuation_value(x1, seq.tB, cm).x2;
  if (seq.q < 1.0 && seq.tB.satisfies(x1)) c.x2_if_B_first = continuation_value(x1, seq.tA, cm).x2;
  return c;
}

std::vector<Point> disclose_first_points(Point x, const Sequential& seq, const CostModel& cm) {
  std::vector<Point> pts{x, closest_in_both(x, seq.tA, seq.tB, cm)};
  const bool parallel = std::abs(cross(seq.tA.normal, seq.tB.normal)) <= kParallelTol;
  if (!parallel) pts.push_back(boundary_intersection(seq.tA, seq.tB));
  if (cm.kind == CostKind::Custom) {
    pts.push_back(min_cost_into(cm, x, seq.tA).point);
    pts.push_back(min_cost_into(cm, x, seq.tB).point);
    pts.push_back(numeric_first_point(x, seq.tA, seq.tB, seq.q, cm));
    pts.push_back(numeric_first_point(x, seq.tB, seq.tA, 1.0 - seq.q, cm));
    return pts;
  }
  const Point xm = to_metric_space(cm, x);
  const HalfPlane a = to_metric_space(cm, seq.tA), b = to_metric_space(cm, seq.tB);
  for (Point p : {project_to_boundary(a, xm), project_to_boundary(b, xm), best_first_point(xm, a, b, seq.q),
                  best_first_point(xm, b, a, 1.0 - seq.q)})
    pts.push_back(from_metric_space(cm, p));
  return pts;
}

// Coordinate descent on x1 for custom metrics, where the candidate set is not
// provably exhaustive.
Candidate refine_disclose(Point x, const Leaf& m, Candidate best, const CostModel& cm) {
  const auto& seq = std::get<Sequential>(m);
  Point x1 = std::visit(overloaded{[](const OneStep& o) { return o.y; },
                                   [](const ConditionalTwoStep& c) { return c.x1; },
                                   [&](const auto&) { return x; }},
                        best.strategy);
  for (double step = 0.1 / cm.eta; step > 1e-6; step *= 0.5) {
    bool moved = true;
    while (moved) {
      moved = false;
      for (Point dir : {Point{1, 0}, Point{-1, 0}, Point{0, 1}, Point{0, -1}}) {
        const Point trial = x1 + step * dir;
        Candidate c = make_candidate(x, m, conditional_from(trial, seq, cm), "conditional-two-step", cm);
        if (c.utility > best.utility + kTieTol) {
          best = std::move(c);
          x1 = trial;
          moved = true;
        }
      }
    }
  }
  return best;
}

BestResponse assemble(Point x, const Leaf& m, const Candidate& c) {
  BestResponse br;
  br.type = x;
  const bool participate = !std::holds_alternative<Abstain>(c.strategy);
  br.strategy = c.strategy;
  br.strategy_class = c.label;
  br.total_expected_cost = c.cost;
  br.acceptance_prob = c.prob;
  br.expected_utility = participate ? c.utility : 0.0;

  auto final_for = [&](Order o) -> Point {
    return std::visit(overloaded{[&](const Abstain&) { return x; }, [](const OneStep& s) { return s.y; },
                                 [](const TwoStep& s) { return s.x2; },
                                 [&](const ConditionalTwoStep& s) {
                                   const auto& seq = std::get<Sequential>(m);
                                   const HalfPlane& first = o == Order::AFirst ? seq.tA : seq.tB;
                                   if (!first.satisfies(s.x1)) return s.x1;
                                   return o == Order::AFirst ? s.x2_if_A_first : s.x2_if_B_first;
                                 }},
                      c.strategy);
  };
  br.final_if_A_first = final_for(Order::AFirst);
  br.final_if_B_first = final_for(Order::BFirst);
  if (std::holds_alternative<Simultaneous>(m)) {
    br.final_if_B_first = br.final_if_A_first;
    br.branches.push_back({0, Order::AFirst, 1.0, acceptance_outcome(m, c.strategy, Order::AFirst),
                           br.final_if_A_first});
  } else {
    const double q = std::get<Sequential>(m).q;
    if (q > 0.0)
      br.branches.push_back({0, Order::AFirst, q, acceptance_outcome(m, c.strategy, Order::AFirst),
                             br.final_if_A_first});
    if (q < 1.0)
      br.branches.push_back({0, Order::BFirst, 1.0 - q, acceptance_outcome(m, c.strategy, Order::BFirst),
                             br.final_if_B_first});
  }
  return br;
}

}  // namespace

std::optional<ZigZag> zigzag_two_step(Point x, const HalfPlane& first, const HalfPlane& second,
                                      const CostModel& cm) {
  const Point xm = to_metric_space(cm, x);
  const HalfPlane f = to_metric_space(cm, first), s = to_metric_space(cm, second);
  if (signed_margin(f, xm) > kBoundaryTol) return std::nullopt;
  const Point xr = reflect(f, xm);
  if (signed_margin(s, xr) > kBoundaryTol) return std::nullopt;
  const Point x2 = project_to_boundary(s, xr);
  const double m2 = signed_margin(f, x2);
  if (m2 >= -kBoundaryTol) return std::nullopt;
  const double mr = signed_margin(f, xr);
  const double t = mr / (mr - m2);
  const Point x1 = xr + t * (x2 - xr);
  return ZigZag{{from_metric_space(cm, x1), from_metric_space(cm, x2)}, cm.eta * distance(xr, x2)};
}

SequentialPath cheapest_sequential_path(Point x, const HalfPlane& first, const HalfPlane& second,
                                        const CostModel& cm) {
  SequentialPath p;
  if (cm.kind == CostKind::Custom) {
    p.x1 = numeric_first_point(x, first, second, 1.0, cm);
    p.x2 = min_cost_into(cm, p.x1, second).point;
    p.cost = path_cost(cm, x, p.x1, p.x2);
    return normalize(x, first, p, cm);
  }
  const Point xm = to_metric_space(cm, x);
  const HalfPlane f = to_metric_space(cm, first), s = to_metric_space(cm, second);
  const Point x1 = best_first_point(xm, f, s, 1.0);
  const Point x2 = project_into(s, x1);
  p.x1 = from_metric_space(cm, x1);
  p.x2 = from_metric_space(cm, x2);
  p.cost = cm.eta * (distance(xm, x1) + distance(x1, x2));
  if (!(x1 == x2) && f.satisfies(x2)) return {p.x2, p.x2, cm.eta * distance(xm, x2)};
  return p;
}

Continuation continuation_value(Point x1, const HalfPlane& realized_second, const CostModel& cm) {
  const MinCost mc = min_cost_into(cm, x1, realized_second);
  if (mc.cost <= 1.0 + kTieTol) return {std::max(0.0, 1.0 - mc.cost), mc.point};
  return {0.0, x1};
}

std::vector<Candidate> strategy_candidates(Point x, const Leaf& m, const CostModel& cm) {
  std::vector<Candidate> out;
  out.push_back({Abstain{}, "abstain", 0.0, 0.0, 0.0, false});
  if (const auto* sim = std::get_if<Simultaneous>(&m)) {
    out.push_back(make_candidate(x, m, OneStep{closest_in_both(x, sim->tA, sim->tB, cm)}, "one-step", cm));
    return out;
  }
  const auto& seq = std::get<Sequential>(m);
  out.push_back(make_candidate(x, m, OneStep{x}, "one-step", cm));
  out.push_back(make_candidate(x, m, OneStep{closest_in_both(x, seq.tA, seq.tB, cm)}, "one-step", cm));
  if (seq.disclosure == Disclosure::NoDisclose || seq.fixed_order()) {
    if (seq.q > 0.0) {
      const SequentialPath ab = cheapest_sequential_path(x, seq.tA, seq.tB, cm);
      out.push_back(make_candidate(x, m, TwoStep{ab.x1, ab.x2}, "two-step-AB", cm));
    }
    if (seq.q < 1.0) {
      const SequentialPath ba = cheapest_sequential_path(x, seq.tB, seq.tA, cm);
      out.push_back(make_candidate(x, m, TwoStep{ba.x1, ba.x2}, "two-step-BA", cm));
    }
    return out;
  }
  for (Point x1 : disclose_first_points(x, seq, cm))
    out.push_back(make_candidate(x, m, conditional_from(x1, seq, cm), "conditional-two-step", cm));
  return out;
}

BestResponse best_response(Point x, const Leaf& m, Setting, const CostModel& cm) {
  const std::vector<Candidate> cands = strategy_candidates(x, m, cm);
  const Candidate* best = &cands.front();
  for (const auto& c : cands) {
    if (std::holds_alternative<Abstain>(c.strategy)) continue;
    if (c.utility < -kTieTol) continue;
    if (std::holds_alternative<Abstain>(best->strategy) || better(c, *best)) best = &c;
  }
  if (cm.kind == CostKind::Custom && std::holds_alternative<Sequential>(m) &&
      std::get<Sequential>(m).disclosure == Disclosure::Disclose && !std::get<Sequential>(m).fixed_order()) {
    Candidate refined = refine_disclose(x, m, *best, cm);
    if (refined.utility >= -kTieTol && better(refined, *best)) return assemble(x, m, refined);
  }
  return assemble(x, m, *best);
}

BestResponse best_response(Point x, const Mechanism& m, Setting setting, const CostModel& cm) {
  return std::visit(
      overloaded{[&](const Simultaneous& s) { return best_response(x, Leaf{s}, setting, cm); },
                 [&](const Sequential& s) { return best_response(x, Leaf{s}, setting, cm); },
                 [&](const Mixture& mix) {
                   BestResponse br;
                   br.type = x;
                   br.strategy_class = "mixture";
                   br.final_if_A_first = br.final_if_B_first = x;
                   for (std::size_t i = 0; i < mix.components.size(); ++i) {
                     const auto& comp = mix.components[i];
                     BestResponse sub = best_response(x, comp.mechanism, setting, cm);
                     br.total_expected_cost += comp.prob * sub.total_expected_cost;
                     br.acceptance_prob += comp.prob * sub.acceptance_prob;
                     br.expected_utility += comp.prob * sub.expected_utility;
                     for (Branch b : sub.branches) {
                       b.component = i;
                       b.weight *= comp.prob;
                       if (b.weight > 0.0) br.branches.push_back(b);
                     }
                     br.components.push_back(std::move(sub));
                   }
                   return br;
                 },
                 [&](const CheapTalkMenu& menu) {
                   const int idx = menu.entry_index(x);
                   BestResponse sub = best_response(x, Leaf{menu.assign(x)}, setting, cm);
                   BestResponse br = sub;
                   br.strategy_class = "menu:" + sub.strategy_class;
                   const std::size_t comp = idx < 0 ? menu.entries.size() : static_cast<std::size_t>(idx);
                   for (auto& b : br.branches) b.component = comp;
                   br.components = {std::move(sub)};
                   return br;
                 }},
      m);
}

Point final_attributes(const BestResponse& br, Order realized_first) {
  return realized_first == Order::AFirst ? br.final_if_A_first : br.final_if_B_first;
}

ConditionOReport condition_o_check(const Sequential& m, const CostModel& cm, const Sampler& sampler,
                                   std::size_t n, std::uint64_t seed, std::size_t max_witnesses) {
  struct Hit {
    std::size_t index;
    Point x;
    double gap;
  };
  std::vector<std::vector<Hit>> per_chunk(chunk_count(n));
  const Leaf leaf{m};
  parallel_chunks(n, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng = Rng::stream(seed, i);
      const Point x = sampler(rng);
      double best_one = 0.0;
      double best_two = -1e300;
      for (const auto& c : strategy_candidates(x, leaf, cm)) {
        if (c.genuine_two_step)
          best_two = std::max(best_two, c.utility);
        else
          best_one = std::max(best_one, c.utility);
      }
      if (best_two >= 0.0 && best_two > best_one + kConditionOTol)
        per_chunk[chunk].push_back({i, x, best_two - best_one});
    }
  });
  ConditionOReport r;
  r.n = n;
  r.seed = seed;
  for (const auto& hits : per_chunk)
    for (const auto& h : hits) {
      ++r.witness_count;
      r.worst_gap = std::max(r.worst_gap, h.gap);
      if (r.witnesses.size() < max_witnesses) r.witnesses.push_back(h.x);
    }
  r.holds = r.witness_count == 0;
  return r;
}

}  // namespace screenlab
