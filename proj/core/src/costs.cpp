#include "screenlab/costs.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "screenlab/errors.hpp"

namespace screenlab {

CostModel CostModel::euclidean(double eta) {
  CostModel cm;
  cm.eta = eta;
  return cm;
}

CostModel CostModel::weighted(double wx, double wy, double eta) {
  CostModel cm;
  cm.kind = CostKind::WeightedNorm;
  cm.eta = eta;
  cm.wx = wx;
  cm.wy = wy;
  return cm;
}

CostModel CostModel::custom(MetricFn metric, double eta, PathFn path) {
  CostModel cm;
  cm.kind = CostKind::Custom;
  cm.eta = eta;
  cm.metric = std::move(metric);
  cm.path = std::move(path);
  return cm;
}

std::string to_string(CostKind kind) {
  switch (kind) {
    case CostKind::Euclidean: return "euclidean";
    case CostKind::WeightedNorm: return "weighted";
    case CostKind::Custom: return "custom";
  }
  return "unknown";
}

double one_step_cost(const CostModel& cm, Point x, Point y) {
  switch (cm.kind) {
    case CostKind::Euclidean: return cm.eta * distance(x, y);
    case CostKind::WeightedNorm: {
      const Point d = y - x;
      return cm.eta * std::sqrt(cm.wx * d.x * d.x + cm.wy * d.y * d.y);
    }
    case CostKind::Custom: return cm.metric(x, y);
  }
  return 0.0;
}

double path_cost(const CostModel& cm, Point x0, Point x1, Point x2) {
  if (cm.kind == CostKind::Custom && cm.path) return cm.path(x0, x1, x2);
  return one_step_cost(cm, x0, x1) + one_step_cost(cm, x1, x2);
}

Point to_metric_space(const CostModel& cm, Point p) {
  if (cm.kind != CostKind::WeightedNorm) return p;
  return {std::sqrt(cm.wx) * p.x, std::sqrt(cm.wy) * p.y};
}

Point from_metric_space(const CostModel& cm, Point p) {
  if (cm.kind != CostKind::WeightedNorm) return p;
  return {p.x / std::sqrt(cm.wx), p.y / std::sqrt(cm.wy)};
}

HalfPlane to_metric_space(const CostModel& cm, const HalfPlane& h) {
  if (cm.kind != CostKind::WeightedNorm) return h;
  // w·p >= b with p = S^-1 p'  <=>  (S^-1 w)·p' >= b.
  return HalfPlane::make({h.normal.x / std::sqrt(cm.wx), h.normal.y / std::sqrt(cm.wy)}, h.offset);
}

HalfPlane from_metric_space(const CostModel& cm, const HalfPlane& h) {
  if (cm.kind != CostKind::WeightedNorm) return h;
  return HalfPlane::make({h.normal.x * std::sqrt(cm.wx), h.normal.y * std::sqrt(cm.wy)}, h.offset);
}

namespace detail {

double golden_section_min(const std::function<double(double)>& f, double lo, double hi, double tol) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

std::pair<double, double> sweep_min(const std::function<double(double)>& f, double lo, double hi,
                                    int samples, bool lo_edge_ok, bool hi_edge_ok) {
  const double step = (hi - lo) / (samples - 1);
  int best = 0;
  double best_v = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double v = f(lo + i * step);
    if (v < best_v) {
      best_v = v;
      best = i;
    }
  }
  if ((best == 0 && !lo_edge_ok) || (best == samples - 1 && !hi_edge_ok)) {
    std::ostringstream os;
    os << "optimum at sweep edge t=" << lo + best * step;
    throw Error(ErrorCode::NoMinimizer, os.str());
  }
  const double a = lo + std::max(0, best - 1) * step;
  const double b = lo + std::min(samples - 1, best + 1) * step;
  double t = golden_section_min(f, a, b);
  double v = f(t);
  if (best_v < v) {
    t = lo + best * step;
    v = best_v;
  }
  return {t, v};
}

}  // namespace detail

namespace {

MinCost custom_into_halfplane(const CostModel& cm, Point x, const HalfPlane& h) {
  if (h.satisfies(x, 0.0)) return {x, 0.0};
  const Point foot = project_to_boundary(h, x);
  const Point d = h.direction();
  auto f = [&](double t) { return cm.metric(x, foot + t * d); };
  const auto [t, v] =
      detail::sweep_min(f, -cm.search_radius, cm.search_radius, cm.sweep_points, false, false);
  return {foot + t * d, v};
}

MinCost custom_into_wedge(const CostModel& cm, Point x, const Wedge& w) {
  if (w.contains(x, 0.0)) return {x, 0.0};
  MinCost best{w.apex, cm.metric(x, w.apex)};
  for (Point dir : {w.ray_a(), w.ray_b()}) {
    auto f = [&](double t) { return cm.metric(x, w.apex + t * dir); };
    const auto [t, v] = detail::sweep_min(f, 0.0, cm.search_radius, cm.sweep_points, true, false);
    if (v < best.cost) best = {w.apex + t * dir, v};
  }
  return best;
}

}  // namespace

MinCost min_cost_into(const CostModel& cm, Point x, const HalfPlane& target) {
  switch (cm.kind) {
    case CostKind::Euclidean: {
      const Point p = project_into(target, x);
      return {p, cm.eta * distance(x, p)};
    }
    case CostKind::WeightedNorm: {
      const Point p = project_into(to_metric_space(cm, target), to_metric_space(cm, x));
      const Point back = from_metric_space(cm, p);
      return {back, one_step_cost(cm, x, back)};
    }
    case CostKind::Custom: return custom_into_halfplane(cm, x, target);
  }
  return {x, 0.0};
}

MinCost min_cost_into(const CostModel& cm, Point x, const Wedge& target) {
  switch (cm.kind) {
    case CostKind::Euclidean: {
      const auto [p, d] = closest_point_in_wedge(target, x);
      return {p, cm.eta * d};
    }
    case CostKind::WeightedNorm: {
      const Wedge w = wedge_from(to_metric_space(cm, target.a), to_metric_space(cm, target.b));
      const auto [p, d] = closest_point_in_wedge(w, to_metric_space(cm, x));
      const Point back = from_metric_space(cm, p);
      return {back, one_step_cost(cm, x, back)};
    }
    case CostKind::Custom: return custom_into_wedge(cm, x, target);
  }
  return {x, 0.0};
}

bool AxiomReport::all_hold() const {
  return std::all_of(checks.begin(), checks.end(), [](const AxiomCheck& c) { return c.holds; });
}

const AxiomCheck& AxiomReport::get(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw std::out_of_range("no axiom " + name);
}

AxiomReport check_axioms(const CostModel& cm, const Sampler& sampler, std::size_t n,
                         std::uint64_t seed) {
  AxiomReport report;
  report.n = n;
  report.seed = seed;
  const char* names[] = {"translation", "homogeneity", "triangle", "monotonicity",
                         "regularity", "assumption1", "additivity"};
  for (const char* nm : names) report.checks.push_back({nm, true, 0.0, {}});
  auto record = [&](std::size_t k, double violation, std::vector<Point> witness) {
    auto& c = report.checks[k];
    if (violation > c.worst_violation) {
      c.worst_violation = violation;
      c.witness = std::move(witness);
    }
  };
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng = Rng::stream(seed, i);
    const Point x0 = sampler(rng), x1 = sampler(rng), x2 = sampler(rng);
    const Point s{rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)};
    const double alpha = rng.uniform(-3.0, 3.0);
    const double c01 = one_step_cost(cm, x0, x1);
    const double p012 = path_cost(cm, x0, x1, x2);

    record(0,
           std::max(std::abs(one_step_cost(cm, x0 + s, x1 + s) - c01),
                    std::abs(path_cost(cm, x0 + s, x1 + s, x2 + s) - p012)),
           {x0, x1, x2});
    record(1,
           std::max(std::abs(one_step_cost(cm, alpha * x0, alpha * x1) - std::abs(alpha) * c01),
                    std::abs(path_cost(cm, alpha * x0, alpha * x1, alpha * x2) -
                             std::abs(alpha) * p012)),
           {x0, x1, x2});
    record(2, std::max(0.0, one_step_cost(cm, x0, x2) - p012), {x0, x1, x2});
    record(3, std::max(0.0, c01 - p012), {x0, x1, x2});

    const double phi = rng.uniform(0.0, 2.0 * kPi);
    const HalfPlane h = HalfPlane::through(x1, {std::cos(phi), std::sin(phi)});
    try {
      const MinCost mc = min_cost_into(cm, x0, h);
      double violation = std::max(0.0, -signed_margin(h, mc.point) - kBoundaryTol);
      const Point foot = project_to_boundary(h, x0);
      for (int k = 0; k < 16; ++k) {
        const Point z = foot + rng.uniform(-3.0, 3.0) * h.direction() + rng.uniform(0.0, 1.0) * h.normal;
        violation = std::max(violation, mc.cost - one_step_cost(cm, x0, z));
      }
      record(4, violation, {x0, mc.point});
    } catch (const Error&) {
      record(4, std::numeric_limits<double>::infinity(), {x0, x1});
    }

    record(5,
           std::max(std::abs(c01 - path_cost(cm, x0, x1, x1)),
                    std::abs(c01 - path_cost(cm, x0, x0, x1))),
           {x0, x1});
    record(6, std::abs(p012 - c01 - one_step_cost(cm, x1, x2)), {x0, x1, x2});
  }
  for (auto& c : report.checks) c.holds = c.worst_violation <= kAxiomTol;
  return report;
}

}  // namespace screenlab
