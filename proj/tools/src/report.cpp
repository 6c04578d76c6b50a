#include "report.hpp"

namespace screenlab::cli {

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
}  // namespace

json to_json(Point p) { return json::array({p.x, p.y}); }

json points_json(const std::vector<Point>& pts) {
  json a = json::array();
  for (Point p : pts) a.push_back(to_json(p));
  return a;
}

json to_json(const HalfPlane& h) { return {{"normal", to_json(h.normal)}, {"offset", h.offset}}; }

json to_json(const Wedge& w) {
  return {{"a", to_json(w.a)}, {"b", to_json(w.b)}, {"apex", to_json(w.apex)}, {"theta", w.theta}};
}

json to_json(const Strategy& s) {
  json j = {{"kind", strategy_kind(s)}};
  std::visit(overloaded{[&](const OneStep& o) { j["y"] = to_json(o.y); },
                        [&](const TwoStep& t) {
                          j["x1"] = to_json(t.x1);
                          j["x2"] = to_json(t.x2);
                        },
                        [&](const ConditionalTwoStep& c) {
                          j["x1"] = to_json(c.x1);
                          j["x2_if_A_first"] = to_json(c.x2_if_A_first);
                          j["x2_if_B_first"] = to_json(c.x2_if_B_first);
                        },
                        [](const Abstain&) {}},
             s);
  return j;
}

json to_json(const BestResponse& br) {
  json j = {{"type", to_json(br.type)},
            {"strategy", to_json(br.strategy)},
            {"strategy_class", br.strategy_class},
            {"total_expected_cost", br.total_expected_cost},
            {"acceptance_prob", br.acceptance_prob},
            {"expected_utility", br.expected_utility},
            {"final_if_A_first", to_json(br.final_if_A_first)},
            {"final_if_B_first", to_json(br.final_if_B_first)}};
  json branches = json::array();
  for (const Branch& b : br.branches)
    branches.push_back({{"component", b.component},
                        {"order", to_string(b.order)},
                        {"weight", b.weight},
                        {"accepted", b.accepted},
                        {"final_point", to_json(b.final_point)}});
  j["branches"] = branches;
  if (!br.components.empty()) {
    json comps = json::array();
    for (const auto& c : br.components) comps.push_back(to_json(c));
    j["components"] = comps;
  }
  return j;
}

namespace {

json sequential_json(const Sequential& s) {
  return {{"type", "sequential"},
          {"tA", to_json(s.tA)},
          {"tB", to_json(s.tB)},
          {"q", s.q},
          {"disclosure", to_string(s.disclosure)}};
}

}  // namespace

json to_json(const Leaf& m) {
  return std::visit(
      overloaded{[](const Simultaneous& s) -> json {
                   return {{"type", "simultaneous"}, {"tA", to_json(s.tA)}, {"tB", to_json(s.tB)}};
                 },
                 [](const Sequential& s) { return sequential_json(s); }},
      m);
}

json to_json(const Mechanism& m) {
  return std::visit(overloaded{[](const Simultaneous& s) { return to_json(Leaf{s}); },
                               [](const Sequential& s) { return sequential_json(s); },
                               [](const Mixture& mx) {
                                 json comps = json::array();
                                 for (const auto& c : mx.components)
                                   comps.push_back({{"prob", c.prob}, {"mechanism", to_json(c.mechanism)}});
                                 return json{{"type", "mixture"}, {"components", comps}};
                               },
                               [](const CheapTalkMenu& menu) {
                                 json entries = json::array();
                                 for (const auto& e : menu.entries)
                                   entries.push_back({{"region", points_json(e.region)},
                                                      {"mechanism", sequential_json(e.mechanism)}});
                                 return json{{"type", "cheap_talk"},
                                             {"entries", entries},
                                             {"fallback", sequential_json(menu.fallback)}};
                               }},
                    m);
}

json to_json(const Estimate& e) { return {{"value", e.value}, {"se", e.se}}; }

namespace {

json witness_json(const std::optional<Witness>& w) {
  if (!w) return nullptr;
  return {{"type", to_json(w->type)}, {"order", to_string(w->order)}};
}

}  // namespace

json to_json(const EvalReport& r) {
  return {{"objective", to_string(r.objective)},
          {"setting", to_string(r.setting)},
          {"p_qualified_selected", to_json(r.p_qualified_selected)},
          {"p_unqualified_selected", to_json(r.p_unqualified_selected)},
          {"feasible", r.feasible},
          {"infeasibility_witness", witness_json(r.infeasibility_witness)},
          {"qualified_missed", r.qualified_missed},
          {"first_best", to_json(r.first_best)},
          {"first_best_gap", r.first_best_gap},
          {"n", r.n},
          {"seed", r.seed}};
}

json to_json(const FeasibilityResult& r) {
  return {{"feasible", r.feasible},
          {"method", r.method == FeasibilityMethod::Analytic ? "analytic" : "monte_carlo"},
          {"witness", witness_json(r.witness)},
          {"reason", r.reason}};
}

json to_json(const DominanceResult& r) {
  return {{"relation", r.relation()},
          {"a_geq_b", r.a_geq_b},
          {"b_geq_a", r.b_geq_a},
          {"a_below_count", r.a_below_count},
          {"b_below_count", r.b_below_count},
          {"a_below_b", points_json(r.a_below_b)},
          {"b_below_a", points_json(r.b_below_a)},
          {"n", r.n},
          {"seed", r.seed}};
}

json to_json(const InclusionResult& r) {
  return {{"holds", r.holds},
          {"violations", r.violations},
          {"witnesses", points_json(r.violation_witnesses)},
          {"n", r.n},
          {"seed", r.seed}};
}

json to_json(const ConditionOReport& r) {
  return {{"holds", r.holds},
          {"witness_count", r.witness_count},
          {"witnesses", points_json(r.witnesses)},
          {"worst_gap", r.worst_gap},
          {"n", r.n},
          {"seed", r.seed}};
}

json to_json(const CriterionReport& r) {
  return {{"holds", r.holds},
          {"empty_erosion", r.empty_erosion},
          {"worst_distance", r.worst_distance},
          {"tolerance", r.tolerance},
          {"witness", to_json(r.witness)}};
}

json to_json(const ConvexPolygon& p) { return points_json(p.vertices); }

}  // namespace screenlab::cli
