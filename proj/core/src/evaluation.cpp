#include "screenlab/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "overloaded.hpp"
#include "screenlab/errors.hpp"
#include "screenlab/parallel.hpp"
#include "screenlab/regions.hpp"

namespace screenlab {

namespace {

constexpr double kInsideTol = kBoundaryTol;

Estimate binomial(double sum, std::size_t n) {
  const double p = n ? sum / static_cast<double>(n) : 0.0;
  return {p, n ? std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n)) : 0.0};
}

double accepted_mass(const BestResponse& br) {
  double a = 0.0;
  for (const auto& b : br.branches)
    if (b.accepted) a += b.weight;
  return a;
}

struct Outcome {
  double qualified = 0.0;
  double unqualified = 0.0;
  bool missed = false;
  std::optional<Order> violation;
};

Outcome grade(const BestResponse& br, const Wedge& H, Setting setting) {
  Outcome o;
  const bool qualified_type = H.contains(br.type, kInsideTol);
  if (setting == Setting::Manipulation) {
    const double acc = accepted_mass(br);
    (qualified_type ? o.qualified : o.unqualified) = acc;
    if (!qualified_type) {
      for (const auto& b : br.branches)
        if (b.accepted && b.weight > 0.0) {
          o.violation = b.order;
          break;
        }
    }
    o.missed = qualified_type && acc < 1.0 - 1e-12;
    return o;
  }
  double acc = 0.0;
  for (const auto& b : br.branches) {
    if (!b.accepted) continue;
    acc += b.weight;
    if (H.contains(b.final_point, kInsideTol)) {
      o.qualified += b.weight;
    } else {
      o.unqualified += b.weight;
      if (!o.violation && b.weight > 0.0) o.violation = b.order;
    }
  }
  o.missed = qualified_type && acc < 1.0 - 1e-12;
  return o;
}

bool first_best_hit(Point x, const Wedge& H, const CostModel& cm) {
  return H.contains(x, kInsideTol) || min_cost_into(cm, x, H).cost <= 1.0;
}

void require_euclidean(const CostModel& cm) {
  if (cm.kind != CostKind::Euclidean)
    throw Error(ErrorCode::MethodUnavailable, "analytic feasibility needs the Euclidean cost");
}

constexpr double kGeomTol = 1e-9;

// inner ⊆ H: apex inside and both extreme rays in H's recession cone.
bool wedge_inside(const Wedge& inner, const Wedge& H) {
  if (!H.contains(inner.apex, kGeomTol)) return false;
  for (Point d : {inner.ray_a(), inner.ray_b()})
    if (dot(H.a.normal, d) < -kGeomTol || dot(H.b.normal, d) < -kGeomTol) return false;
  return true;
}

// inner ⊕ B(r) ⊆ H.
bool collar_inside(const Wedge& inner, const Wedge& H, double r) {
  for (Point d : {inner.ray_a(), inner.ray_b()})
    if (dot(H.a.normal, d) < -kGeomTol || dot(H.b.normal, d) < -kGeomTol) return false;
  return signed_margin(H.a, inner.apex) >= r - kGeomTol && signed_margin(H.b, inner.apex) >= r - kGeomTol;
}

FeasibilityResult infeasible(std::string reason, Point p, Order o = Order::AFirst) {
  FeasibilityResult r;
  r.feasible = false;
  r.reason = std::move(reason);
  r.witness = Witness{p, o};
  return r;
}

FeasibilityResult manipulation_sequential(const HalfPlane& tA, const HalfPlane& tB, double q, const Wedge& H,
                                     double eta) {
  const Wedge W = wedge_from(tA, tB);
  if (!collar_inside(W, H, 1.0 / eta)) return infeasible("unit-cost collar leaves H", W.apex);
  if (W.theta < 90.0) {
    const RegionSpec spec = canonical_region_spec(tA, tB, q, eta);
    for (Point v : spec.Cq_poly)
      if (!H.contains(spec.to_world(v), kGeomTol)) return infeasible("C_q vertex outside H", spec.to_world(v));
    for (Point v : spec.Dq_poly)
      if (!H.contains(spec.to_world(v), kGeomTol))
        return infeasible("D_q vertex outside H", spec.to_world(v), Order::BFirst);
  }
  return {};
}

FeasibilityResult analytic_leaf(const Leaf& leaf, const Wedge& H, Setting setting, double eta) {
  return std::visit(
      detail::overloaded{
          [&](const Simultaneous& s) -> FeasibilityResult {
            const Wedge W = wedge_from(s.tA, s.tB);
            if (setting == Setting::Manipulation) {
              if (!collar_inside(W, H, 1.0 / eta)) return infeasible("unit-cost collar leaves H", W.apex);
              return {};
            }
            if (!wedge_inside(W, H)) return infeasible("announced wedge leaves H", W.apex);
            return {};
          },
          [&](const Sequential& s) -> FeasibilityResult {
            if (s.degenerate) throw Error(ErrorCode::MethodUnavailable, "parallel announced tests");
            if (setting == Setting::Manipulation) {
              if (s.fixed_order() || s.disclosure == Disclosure::NoDisclose)
                return manipulation_sequential(s.tA, s.tB, s.q, H, eta);
              // With disclosure every accepted branch is a fixed-order path of cost <= 1.
              auto r = manipulation_sequential(s.tA, s.tB, 1.0, H, eta);
              return r.feasible ? manipulation_sequential(s.tA, s.tB, 0.0, H, eta) : r;
            }
            const Wedge W = wedge_from(s.tA, s.tB);
            if (!wedge_inside(W, H)) return infeasible("announced wedge leaves H", W.apex);
            if (s.fixed_order()) {
              if (W.theta >= 90.0) return {};
              const HalfPlane& first = s.q == 1.0 ? s.tA : s.tB;
              const HalfPlane& second = s.q == 1.0 ? s.tB : s.tA;
              const RegionSpec spec = canonical_region_spec(first, second, 1.0, eta);
              const Point end = project_to_boundary(second, spec.to_world(spec.Eq_tilde));
              if (!H.contains(end, kGeomTol)) return infeasible("zig-zag endpoint outside H", end);
              return {};
            }
            if (s.disclosure == Disclosure::NoDisclose &&
                (W.theta >= 90.0 - 1e-9 || (W.theta >= 30.0 - 1e-9 && std::abs(s.q - 0.5) < 1e-12)))
              return {};
            throw Error(ErrorCode::MethodUnavailable, "no analytic investment check for this mechanism");
          }},
      leaf);
}

}  // namespace

std::string to_string(Objective o) { return o == Objective::PI ? "PI" : "PII"; }

GridDensity GridDensity::from_function(Point origin, double cell, std::size_t nx, std::size_t ny,
                                       const std::function<double(Point)>& f) {
  std::vector<double> w(nx * ny);
  for (std::size_t iy = 0; iy < ny; ++iy)
    for (std::size_t ix = 0; ix < nx; ++ix)
      w[iy * nx + ix] = f(origin + Point{(ix + 0.5) * cell, (iy + 0.5) * cell});
  return from_weights(origin, cell, nx, ny, std::move(w));
}

GridDensity GridDensity::from_weights(Point origin, double cell, std::size_t nx, std::size_t ny,
                                      std::vector<double> weights) {
  if (weights.size() != nx * ny || nx == 0 || ny == 0 || !(cell > 0.0))
    throw Error(ErrorCode::SchemaError, "grid density shape mismatch");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw Error(ErrorCode::SchemaError, "grid density weights must be non-negative");
    total += w;
  }
  if (!(total > 0.0)) throw Error(ErrorCode::SchemaError, "grid density has zero mass");
  GridDensity g{origin, cell, nx, ny, std::move(weights), {}};
  for (double& w : g.weights) w /= total;
  g.cumulative.resize(g.weights.size());
  std::partial_sum(g.weights.begin(), g.weights.end(), g.cumulative.begin());
  return g;
}

Distribution Distribution::uniform(Point lo, Point hi) { return Distribution{UniformBox{lo, hi}, std::nullopt}; }

double Distribution::pdf(Point p) const {
  return std::visit(
      detail::overloaded{
          [&](const UniformBox& u) {
            const double area = (u.hi.x - u.lo.x) * (u.hi.y - u.lo.y);
            if (area <= 0.0) return 0.0;
            return (p.x >= u.lo.x && p.x <= u.hi.x && p.y >= u.lo.y && p.y <= u.hi.y) ? 1.0 / area : 0.0;
          },
          [&](const GaussianMixture& g) {
            double total = 0.0, f = 0.0;
            for (const auto& c : g.components) total += c.weight;
            for (const auto& c : g.components) {
              const double zx = (p.x - c.mean.x) / c.sx, zy = (p.y - c.mean.y) / c.sy;
              f += c.weight / total * std::exp(-0.5 * (zx * zx + zy * zy)) / (2.0 * kPi * c.sx * c.sy);
            }
            return f;
          },
          [&](const GridDensity& g) {
            const double fx = (p.x - g.origin.x) / g.cell, fy = (p.y - g.origin.y) / g.cell;
            if (fx < 0.0 || fy < 0.0 || fx >= g.nx || fy >= g.ny) return 0.0;
            const auto ix = static_cast<std::size_t>(fx), iy = static_cast<std::size_t>(fy);
            return g.weights[iy * g.nx + ix] / (g.cell * g.cell);
          }},
      kind);
}

Point Distribution::sample(Rng& rng) const {
  return std::visit(
      detail::overloaded{
          [&](const UniformBox& u) { return rng.in_box(u.lo, u.hi); },
          [&](const GaussianMixture& g) {
            double total = 0.0;
            for (const auto& c : g.components) total += c.weight;
            double u = rng.uniform() * total;
            const GaussianComponent* pick = &g.components.back();
            for (const auto& c : g.components) {
              if (u < c.weight) {
                pick = &c;
                break;
              }
              u -= c.weight;
            }
            const double zx = rng.normal(), zy = rng.normal();
            return Point{pick->mean.x + pick->sx * zx, pick->mean.y + pick->sy * zy};
          },
          [&](const GridDensity& g) {
            const double u = rng.uniform();
            auto it = std::upper_bound(g.cumulative.begin(), g.cumulative.end(), u);
            std::size_t k = std::min<std::size_t>(it - g.cumulative.begin(), g.weights.size() - 1);
            const std::size_t ix = k % g.nx, iy = k / g.nx;
            const Point lo = g.origin + Point{ix * g.cell, iy * g.cell};
            return rng.in_box(lo, lo + Point{g.cell, g.cell});
          }},
      kind);
}

Sampler Distribution::sampler() const {
  return [d = *this](Rng& rng) { return d.sample(rng); };
}

Monotonicity grid_monotonicity(const GridDensity& g, const Wedge& H) {
  double lo_a = 0.0, hi_a = 0.0, lo_b = 0.0, hi_b = 0.0, scale = 0.0;
  for (double w : g.weights) scale = std::max(scale, w);
  for (std::size_t iy = 0; iy < g.ny; ++iy) {
    for (std::size_t ix = 0; ix < g.nx; ++ix) {
      const std::size_t x0 = ix ? ix - 1 : ix, x1 = ix + 1 < g.nx ? ix + 1 : ix;
      const std::size_t y0 = iy ? iy - 1 : iy, y1 = iy + 1 < g.ny ? iy + 1 : iy;
      const Point grad{x1 > x0 ? (g.weights[iy * g.nx + x1] - g.weights[iy * g.nx + x0]) / ((x1 - x0) * g.cell) : 0.0,
                       y1 > y0 ? (g.weights[y1 * g.nx + ix] - g.weights[y0 * g.nx + ix]) / ((y1 - y0) * g.cell) : 0.0};
      const double a = dot(grad, H.a.normal), b = dot(grad, H.b.normal);
      lo_a = std::min(lo_a, a), hi_a = std::max(hi_a, a);
      lo_b = std::min(lo_b, b), hi_b = std::max(hi_b, b);
    }
  }
  const double eps = 1e-12 * scale / g.cell;
  auto sign = [eps](double lo, double hi) { return hi <= eps ? -1 : (lo >= -eps ? 1 : 0); };
  return {sign(lo_a, hi_a), sign(lo_b, hi_b)};
}

EvalReport evaluate(const Mechanism& m, const Wedge& H, const Distribution& dist, Setting setting,
                    const CostModel& cm, Objective objective, std::size_t n, std::uint64_t seed) {
  const auto v = validate(m);
  if (!v.ok) throw Error(ErrorCode::SchemaError, "invalid mechanism: " + v.errors.front());
  if (n == 0) throw Error(ErrorCode::SchemaError, "n must be positive");

  struct Partial {
    double qualified = 0.0, unqualified = 0.0, fb = 0.0;
    std::size_t missed = 0;
    std::optional<Witness> witness;
  };
  std::vector<Partial> parts(chunk_count(n));
  parallel_chunks(n, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    Partial& p = parts[chunk];
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng = Rng::stream(seed, i);
      const Point x = dist.sample(rng);
      const Outcome o = grade(best_response(x, m, setting, cm), H, setting);
      p.qualified += o.qualified;
      p.unqualified += o.unqualified;
      p.missed += o.missed;
      if (o.violation && !p.witness) p.witness = Witness{x, *o.violation};
      p.fb += first_best_hit(x, H, cm);
    }
  });

  EvalReport rep;
  rep.objective = objective;
  rep.setting = setting;
  rep.n = n;
  rep.seed = seed;
  double q = 0.0, u = 0.0, fb = 0.0;
  for (const auto& p : parts) {
    q += p.qualified;
    u += p.unqualified;
    fb += p.fb;
    rep.qualified_missed += p.missed;
    if (p.witness && !rep.infeasibility_witness) rep.infeasibility_witness = p.witness;
  }
  rep.p_qualified_selected = binomial(q, n);
  rep.p_unqualified_selected = binomial(u, n);
  rep.first_best = binomial(fb, n);
  rep.first_best_gap = rep.first_best.value - rep.p_qualified_selected.value;
  rep.feasible = !rep.infeasibility_witness.has_value();
  return rep;
}

FeasibilityResult feasibility(const Mechanism& m, const Wedge& H, Setting setting, const CostModel& cm,
                              FeasibilityMethod method, std::size_t n, std::uint64_t seed,
                              const Sampler& sampler) {
  if (method == FeasibilityMethod::Analytic) {
    require_euclidean(cm);
    const double eta = cm.eta;
    return std::visit(
        detail::overloaded{
            [&](const Simultaneous& s) { return analytic_leaf(s, H, setting, eta); },
            [&](const Sequential& s) { return analytic_leaf(s, H, setting, eta); },
            [&](const Mixture& mix) {
              for (const auto& c : mix.components) {
                if (c.prob <= 0.0) continue;
                auto r = analytic_leaf(c.mechanism, H, setting, eta);
                if (!r.feasible) return r;
              }
              return FeasibilityResult{};
            },
            [&](const CheapTalkMenu&) -> FeasibilityResult {
              throw Error(ErrorCode::MethodUnavailable, "no analytic check for cheap-talk menus");
            }},
        m);
  }

  const Sampler draw = sampler ? sampler : centered_sampler(H.apex, 3.0 / cm.eta);
  std::vector<std::optional<Witness>> found(chunk_count(n));
  parallel_chunks(n, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end && !found[chunk]; ++i) {
      Rng rng = Rng::stream(seed, i);
      const Point x = draw(rng);
      const Outcome o = grade(best_response(x, m, setting, cm), H, setting);
      if (o.violation) found[chunk] = Witness{x, *o.violation};
    }
  });
  FeasibilityResult r;
  r.method = FeasibilityMethod::MonteCarlo;
  for (const auto& w : found) {
    if (w) {
      r.feasible = false;
      r.witness = w;
      r.reason = "selected unqualified type";
      break;
    }
  }
  return r;
}

bool pii_feasible_analytic(const Simultaneous& m, const Wedge& H, const CostModel& cm) {
  require_euclidean(cm);
  const Wedge W = wedge_from(m.tA, m.tB);
  for (Point d : {H.ray_a(), H.ray_b()})
    if (dot(m.tA.normal, d) < -kGeomTol || dot(m.tB.normal, d) < -kGeomTol) return false;
  return closest_point_in_wedge(W, H.apex).second <= cm.reach() + kGeomTol;
}

Estimate first_best(const Distribution& dist, const Wedge& H, const CostModel& cm, std::size_t n,
                    std::uint64_t seed) {
  std::vector<double> parts(chunk_count(n));
  parallel_chunks(n, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng = Rng::stream(seed, i);
      parts[chunk] += first_best_hit(dist.sample(rng), H, cm);
    }
  });
  return binomial(std::accumulate(parts.begin(), parts.end(), 0.0), n);
}

std::string DominanceResult::relation() const {
  if (a_geq_b && b_geq_a) return "A>=B,B>=A";
  if (a_geq_b) return "A>=B";
  if (b_geq_a) return "B>=A";
  return "incomparable";
}

DominanceResult dominance_compare(const Mechanism& a, const Mechanism& b, const Sampler& sampler,
                                  Setting setting, const CostModel& cm, std::size_t n,
                                  std::uint64_t seed, std::size_t max_witnesses) {
  struct Partial {
    std::vector<Point> a_below, b_below;
    std::size_t a_count = 0, b_count = 0;
  };
  std::vector<Partial> parts(chunk_count(n));
  parallel_chunks(n, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    Partial& p = parts[chunk];
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng = Rng::stream(seed, i);
      const Point x = sampler(rng);
      const double pa = best_response(x, a, setting, cm).acceptance_prob;
      const double pb = best_response(x, b, setting, cm).acceptance_prob;
      if (pa < pb - kDominanceTol) {
        ++p.a_count;
        if (p.a_below.size() < max_witnesses) p.a_below.push_back(x);
      } else if (pb < pa - kDominanceTol) {
        ++p.b_count;
        if (p.b_below.size() < max_witnesses) p.b_below.push_back(x);
      }
    }
  });
  DominanceResult r;
  r.n = n;
  r.seed = seed;
  for (const auto& p : parts) {
    r.a_below_count += p.a_count;
    r.b_below_count += p.b_count;
    for (Point x : p.a_below)
      if (r.a_below_b.size() < max_witnesses) r.a_below_b.push_back(x);
    for (Point x : p.b_below)
      if (r.b_below_a.size() < max_witnesses) r.b_below_a.push_back(x);
  }
  r.a_geq_b = r.a_below_count == 0;
  r.b_geq_a = r.b_below_count == 0;
  return r;
}

}  // namespace screenlab
