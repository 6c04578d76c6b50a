#include "screenlab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "overloaded.hpp"
#include "screenlab/errors.hpp"
#include "screenlab/parallel.hpp"

namespace screenlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Lower envelope of parabolas (Felzenszwalb & Huttenlocher), with argmin.
void envelope(const std::vector<double>& f, std::vector<double>& d, std::vector<long>& arg,
              std::vector<long>& v, std::vector<double>& z) {
  const long n = static_cast<long>(f.size());
  long k = -1;
  for (long q = 0; q < n; ++q) {
    if (f[q] == kInf) continue;
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -kInf;
      z[1] = kInf;
      continue;
    }
    double s;
    for (;;) {
      const long p = v[k];
      s = ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * double(q - p));
      if (s <= z[k]) {
        --k;
      } else {
        break;
      }
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  if (k < 0) {
    std::fill(d.begin(), d.end(), kInf);
    std::fill(arg.begin(), arg.end(), -1);
    return;
  }
  long j = 0;
  for (long q = 0; q < n; ++q) {
    while (z[j + 1] < q) ++j;
    d[q] = double(q - v[j]) * double(q - v[j]) + f[v[j]];
    arg[q] = v[j];
  }
}

struct Choice {
  double utility = 0.0;
  double prob = 0.0;
  double cost = 0.0;
  Strategy strategy = Abstain{};
  std::string cls = "abstain";
};

void consider(Choice& best, double u, double prob, double cost, Strategy s, const char* cls) {
  const bool better = u > best.utility + kTieTol ||
                      (std::abs(u - best.utility) <= kTieTol &&
                       (prob > best.prob + kTieTol || (std::abs(prob - best.prob) <= kTieTol && cost < best.cost)));
  if (better && u >= -kTieTol) best = {u, prob, cost, std::move(s), cls};
}

struct Masks {
  std::vector<char> a, b, w;
};

Masks build_masks(const GridSpec& g, const HalfPlane& tA, const HalfPlane& tB) {
  const std::size_t nx = g.nx(), ny = g.ny();
  Masks m{std::vector<char>(nx * ny), std::vector<char>(nx * ny), std::vector<char>(nx * ny)};
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) {
      const Point p = g.at(i, j);
      const std::size_t k = j * nx + i;
      m.a[k] = tA.satisfies(p, 0.0);
      m.b[k] = tB.satisfies(p, 0.0);
      m.w[k] = m.a[k] && m.b[k];
    }
  return m;
}

// Best response to one leaf over a fixed lattice.
class LeafOracle {
 public:
  LeafOracle(const Leaf& leaf, const CostModel& cm, GridSpec grid) : cm_(cm), grid_(grid) {
    std::visit(detail::overloaded{[&](const Simultaneous& s) {
                                    simultaneous_ = true;
                                    tA_ = s.tA;
                                    tB_ = s.tB;
                                  },
                                  [&](const Sequential& s) {
                                    tA_ = s.tA;
                                    tB_ = s.tB;
                                    q_ = s.q;
                                    disclose_ = s.disclosure == Disclosure::Disclose && !s.fixed_order();
                                  }},
               leaf);
  }

  // Coarsens the lattice until pair enumeration fits under the cap.
  void prepare_pairs(Point x) {
    if (cm_.kind == CostKind::Euclidean || simultaneous_) return prepare_fields();
    for (;;) {
      const double reach = first_reach(x);
      const double side = 2.0 * reach / grid_.delta + 1.0;
      const double pairs = side * side * static_cast<double>(grid_.size());
      if (pairs <= static_cast<double>(kMaxOraclePairs)) break;
      grid_.delta *= 2.0;
      coarsened_ = true;
    }
    masks_ = build_masks(grid_, tA_, tB_);
  }

  void prepare_fields() {
    masks_ = build_masks(grid_, tA_, tB_);
    if (cm_.kind != CostKind::Euclidean) return;
    fa_ = detail::distance_transform(masks_.a, grid_.nx(), grid_.ny());
    fb_ = detail::distance_transform(masks_.b, grid_.nx(), grid_.ny());
  }

  Choice solve(Point x) const { return cm_.kind == CostKind::Euclidean ? solve_fields(x) : solve_pairs(x); }

  bool coarsened() const { return coarsened_; }
  double delta() const { return grid_.delta; }

 private:
  double first_reach(Point x) const {
    // Largest Euclidean step with cost <= 1, probed along the axes and diagonals.
    double reach = 0.0;
    for (int k = 0; k < 8; ++k) {
      const Point d{std::cos(k * kPi / 4), std::sin(k * kPi / 4)};
      double lo = 0.0, hi = 1.0;
      while (one_step_cost(cm_, x, x + hi * d) <= 1.0 && hi < 1e6) hi *= 2.0;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (one_step_cost(cm_, x, x + mid * d) <= 1.0 ? lo : hi) = mid;
      }
      reach = std::max(reach, hi);
    }
    return reach * 1.5;
  }

  template <class F>
  void for_ball(Point x, double radius, F&& f) const {
    const std::size_t nx = grid_.nx(), ny = grid_.ny();
    const double fi0 = std::ceil((x.x - radius - grid_.lo.x) / grid_.delta);
    const double fi1 = std::floor((x.x + radius - grid_.lo.x) / grid_.delta);
    const double fj0 = std::ceil((x.y - radius - grid_.lo.y) / grid_.delta);
    const double fj1 = std::floor((x.y + radius - grid_.lo.y) / grid_.delta);
    const long i0 = std::max(0L, long(fi0)), i1 = std::min(long(nx) - 1, long(fi1));
    const long j0 = std::max(0L, long(fj0)), j1 = std::min(long(ny) - 1, long(fj1));
    for (long j = j0; j <= j1; ++j)
      for (long i = i0; i <= i1; ++i) f(std::size_t(j) * nx + std::size_t(i), grid_.at(i, j));
  }

  Point point_of(long k) const { return grid_.at(std::size_t(k) % grid_.nx(), std::size_t(k) / grid_.nx()); }

  Choice solve_fields(Point x) const {
    const double eta = cm_.eta, r = 1.0 / eta, delta = grid_.delta;
    Choice best;
    for_ball(x, r + 1e-12, [&](std::size_t k, Point y) {
      const double c0 = eta * distance(x, y);
      if (c0 > 1.0 + kTieTol) return;
      const bool inA = masks_.a[k], inB = masks_.b[k];
      if (inA && inB) consider(best, 1.0 - c0, 1.0, c0, OneStep{y}, "one-step");
      if (simultaneous_) return;
      const double dB = fb_.nearest[k] < 0 ? kInf : eta * std::sqrt(fb_.d2[k]) * delta;
      const double dA = fa_.nearest[k] < 0 ? kInf : eta * std::sqrt(fa_.d2[k]) * delta;
      if (!disclose_) {
        if (inA && dB < kInf && dB > 0.0)
          consider(best, q_ - c0 - dB, q_, c0 + dB, TwoStep{y, point_of(fb_.nearest[k])}, "two-step-AB");
        if (inB && dA < kInf && dA > 0.0)
          consider(best, (1.0 - q_) - c0 - dA, 1.0 - q_, c0 + dA, TwoStep{y, point_of(fa_.nearest[k])},
                   "two-step-BA");
        return;
      }
      const bool goA = inA && dB <= 1.0, goB = inB && dA <= 1.0;
      const double vA = goA ? 1.0 - dB : 0.0, vB = goB ? 1.0 - dA : 0.0;
      const double prob = q_ * goA + (1.0 - q_) * goB;
      if (prob <= 0.0) return;
      const double cost = c0 + q_ * (goA ? dB : 0.0) + (1.0 - q_) * (goB ? dA : 0.0);
      consider(best, q_ * vA + (1.0 - q_) * vB - c0, prob, cost,
               ConditionalTwoStep{y, goA ? point_of(fb_.nearest[k]) : y, goB ? point_of(fa_.nearest[k]) : y},
               "conditional-two-step");
    });
    return best;
  }

  Choice solve_pairs(Point x) const {
    Choice best;
    const std::size_t n = grid_.size();
    std::vector<std::pair<std::size_t, Point>> firsts;
    for_ball(x, first_reach(x), [&](std::size_t k, Point y) {
      if (one_step_cost(cm_, x, y) <= 1.0 + kTieTol) firsts.push_back({k, y});
    });
    for (const auto& [k, y] : firsts) {
      const double c0 = one_step_cost(cm_, x, y);
      const bool inA = masks_.a[k], inB = masks_.b[k];
      if (inA && inB) consider(best, 1.0 - c0, 1.0, c0, OneStep{y}, "one-step");
      if (simultaneous_ || !(inA || inB)) continue;
      // Cheapest continuation into each test from y.
      double cA = kInf, cB = kInf;
      Point zA = y, zB = y;
      for (std::size_t m = 0; m < n; ++m) {
        if (!masks_.a[m] && !masks_.b[m]) continue;
        const Point z = point_of(long(m));
        const double c = path_cost(cm_, x, y, z) - c0;
        if (masks_.b[m] && c < cB) cB = c, zB = z;
        if (masks_.a[m] && c < cA) cA = c, zA = z;
      }
      if (!disclose_) {
        if (inA && cB < kInf && zB != y) consider(best, q_ - c0 - cB, q_, c0 + cB, TwoStep{y, zB}, "two-step-AB");
        if (inB && cA < kInf && zA != y)
          consider(best, (1.0 - q_) - c0 - cA, 1.0 - q_, c0 + cA, TwoStep{y, zA}, "two-step-BA");
        continue;
      }
      const bool goA = inA && cB <= 1.0, goB = inB && cA <= 1.0;
      const double prob = q_ * goA + (1.0 - q_) * goB;
      if (prob <= 0.0) continue;
      const double cost = c0 + q_ * (goA ? cB : 0.0) + (1.0 - q_) * (goB ? cA : 0.0);
      consider(best, q_ * (goA ? 1.0 - cB : 0.0) + (1.0 - q_) * (goB ? 1.0 - cA : 0.0) - c0, prob, cost,
               ConditionalTwoStep{y, goA ? zB : y, goB ? zA : y}, "conditional-two-step");
    }
    return best;
  }

  const CostModel& cm_;
  GridSpec grid_;
  HalfPlane tA_, tB_;
  double q_ = 1.0;
  bool simultaneous_ = false;
  bool disclose_ = false;
  bool coarsened_ = false;
  Masks masks_;
  detail::DistanceField fa_, fb_;
};

void fill(BestResponse& br, const Choice& c) {
  br.strategy = c.strategy;
  br.strategy_class = c.cls;
  br.expected_utility = c.utility;
  br.acceptance_prob = c.prob;
  br.total_expected_cost = c.cost;
}

// One prepared oracle per leaf the mechanism may route a type to.
struct MechanismOracle {
  std::vector<std::unique_ptr<LeafOracle>> leaves;
  std::vector<double> weights;
  const CheapTalkMenu* menu = nullptr;

  MechanismOracle(const Mechanism& m, const CostModel& cm, const GridSpec& grid) {
    auto add = [&](const Leaf& leaf, double w) {
      leaves.push_back(std::make_unique<LeafOracle>(leaf, cm, grid));
      weights.push_back(w);
    };
    std::visit(detail::overloaded{[&](const Simultaneous& s) { add(s, 1.0); },
                                  [&](const Sequential& s) { add(s, 1.0); },
                                  [&](const Mixture& mix) {
                                    for (const auto& c : mix.components) add(c.mechanism, c.prob);
                                  },
                                  [&](const CheapTalkMenu& menu_) {
                                    menu = &menu_;
                                    for (const auto& e : menu_.entries) add(e.mechanism, 1.0);
                                    add(menu_.fallback, 1.0);
                                  }},
               m);
  }

  std::vector<std::size_t> route(Point x) const {
    if (menu) {
      const int e = menu->entry_index(x);
      return {e < 0 ? leaves.size() - 1 : std::size_t(e)};
    }
    std::vector<std::size_t> all(leaves.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return all;
  }
};

}  // namespace

std::size_t GridSpec::nx() const { return static_cast<std::size_t>(std::floor((hi.x - lo.x) / delta + 1e-9)) + 1; }
std::size_t GridSpec::ny() const { return static_cast<std::size_t>(std::floor((hi.y - lo.y) / delta + 1e-9)) + 1; }

bool GridSpec::valid() const { return delta > 0.0 && hi.x > lo.x && hi.y > lo.y; }

GridSpec GridSpec::around(Point center, double half_width, double delta) {
  return {center - Point{half_width, half_width}, center + Point{half_width, half_width}, delta};
}

GridSpec default_grid(Point apex, double eta) { return GridSpec::around(apex, 3.0 / eta, 0.01 / eta); }

namespace detail {

DistanceField distance_transform(const std::vector<char>& mask, std::size_t nx, std::size_t ny) {
  DistanceField out{std::vector<double>(nx * ny), std::vector<long>(nx * ny, -1)};
  std::vector<double> rows(nx * ny);
  std::vector<long> row_arg(nx * ny);
  {
    std::vector<double> f(nx), d(nx);
    std::vector<long> arg(nx), v(nx);
    std::vector<double> z(nx + 1);
    for (std::size_t j = 0; j < ny; ++j) {
      for (std::size_t i = 0; i < nx; ++i) f[i] = mask[j * nx + i] ? 0.0 : kInf;
      envelope(f, d, arg, v, z);
      std::copy(d.begin(), d.end(), rows.begin() + j * nx);
      std::copy(arg.begin(), arg.end(), row_arg.begin() + j * nx);
    }
  }
  std::vector<double> f(ny), d(ny);
  std::vector<long> arg(ny), v(ny);
  std::vector<double> z(ny + 1);
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) f[j] = rows[j * nx + i];
    envelope(f, d, arg, v, z);
    for (std::size_t j = 0; j < ny; ++j) {
      out.d2[j * nx + i] = d[j];
      if (arg[j] >= 0) out.nearest[j * nx + i] = arg[j] * long(nx) + row_arg[arg[j] * nx + i];
    }
  }
  return out;
}

}  // namespace detail

OracleResult grid_best_response(Point x, const Mechanism& m, Setting setting, const CostModel& cm,
                                 const GridSpec& grid) {
  (void)setting;  // strategies are shared; only grading differs
  if (!grid.valid()) throw Error(ErrorCode::SchemaError, "invalid grid");
  MechanismOracle oracle(m, cm, grid);
  OracleResult res;
  res.br.type = x;
  res.delta = grid.delta;
  const auto route = oracle.route(x);
  double total_w = 0.0;
  for (std::size_t k : route) {
    LeafOracle& leaf = *oracle.leaves[k];
    leaf.prepare_pairs(x);
    const Choice c = leaf.solve(x);
    if (leaf.coarsened()) {
      res.coarsened = true;
      res.delta = std::max(res.delta, leaf.delta());
    }
    BestResponse sub;
    sub.type = x;
    fill(sub, c);
    const double w = oracle.menu ? 1.0 : oracle.weights[k];
    total_w += w;
    res.br.expected_utility += w * c.utility;
    res.br.acceptance_prob += w * c.prob;
    res.br.total_expected_cost += w * c.cost;
    res.br.components.push_back(std::move(sub));
  }
  if (res.br.components.size() == 1) {
    res.br.strategy = res.br.components.front().strategy;
    res.br.strategy_class = res.br.components.front().strategy_class;
  } else {
    res.br.strategy_class = "mixture";
  }
  (void)total_w;
  if (res.coarsened) {
    std::ostringstream msg;
    msg << "pair enumeration capped at " << kMaxOraclePairs << "; lattice coarsened to delta=" << res.delta;
    res.warning = msg.str();
  }
  return res;
}

GridPath grid_sequential_cost(Point x, const HalfPlane& first, const HalfPlane& second, const GridSpec& grid,
                              double eta) {
  const Masks m = build_masks(grid, first, second);
  const auto field = detail::distance_transform(m.b, grid.nx(), grid.ny());
  const std::size_t nx = grid.nx();
  GridPath best{kInf, x, x};
  for (std::size_t k = 0; k < m.a.size(); ++k) {
    if (!m.a[k] || field.nearest[k] < 0) continue;
    const Point y = grid.at(k % nx, k / nx);
    const double c = eta * (distance(x, y) + std::sqrt(field.d2[k]) * grid.delta);
    if (c < best.cost) {
      const long t = field.nearest[k];
      best = {c, y, grid.at(std::size_t(t) % nx, std::size_t(t) / nx)};
    }
  }
  return best;
}

std::string Occupancy::to_csv() const {
  std::ostringstream out;
  out.precision(10);
  out << "x,y,prob\n";
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) {
      const Point c = center(i, j);
      out << c.x << ',' << c.y << ',' << at(i, j) << '\n';
    }
  return out.str();
}

Occupancy oracle_region(const Mechanism& m, Setting setting, const CostModel& cm, const GridSpec& grid,
                        double cell) {
  (void)setting;
  if (!grid.valid() || !(cell > 0.0)) throw Error(ErrorCode::SchemaError, "invalid grid");
  if (cm.kind != CostKind::Euclidean)
    throw Error(ErrorCode::MethodUnavailable, "oracle regions need the Euclidean cost");
  MechanismOracle oracle(m, cm, grid);
  for (auto& leaf : oracle.leaves) leaf->prepare_fields();
  Occupancy occ;
  occ.lo = grid.lo;
  occ.cell = cell;
  occ.nx = static_cast<std::size_t>(std::floor((grid.hi.x - grid.lo.x) / cell + 1e-9));
  occ.ny = static_cast<std::size_t>(std::floor((grid.hi.y - grid.lo.y) / cell + 1e-9));
  occ.prob.assign(occ.nx * occ.ny, 0.0);
  parallel_chunks(occ.prob.size(), [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const Point c = occ.center(k % occ.nx, k / occ.nx);
      double p = 0.0;
      for (std::size_t leaf : oracle.route(c))
        p += (oracle.menu ? 1.0 : oracle.weights[leaf]) * oracle.leaves[leaf]->solve(c).prob;
      occ.prob[k] = p;
    }
  });
  return occ;
}

}  // namespace screenlab
