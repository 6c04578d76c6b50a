#include "scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "report.hpp"
#include "screenlab/errors.hpp"

namespace screenlab::cli {

using json = nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& ptr, const std::string& msg) {
  throw Error(ErrorCode::SchemaError, (ptr.empty() ? "/" : ptr) + ": " + msg);
}

const json& field(const json& j, const std::string& key, const std::string& ptr) {
  if (!j.is_object()) fail(ptr, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(ptr + "/" + key, "missing");
  return *it;
}

double number(const json& j, const std::string& ptr) {
  if (!j.is_number()) fail(ptr, "expected a number");
  return j.get<double>();
}

double number_or(const json& j, const std::string& key, double fallback, const std::string& ptr) {
  return j.contains(key) ? number(j[key], ptr + "/" + key) : fallback;
}

std::string text(const json& j, const std::string& ptr) {
  if (!j.is_string()) fail(ptr, "expected a string");
  return j.get<std::string>();
}

Point point(const json& j, const std::string& ptr) {
  if (!j.is_array() || j.size() != 2) fail(ptr, "expected [x, y]");
  return {number(j[0], ptr + "/0"), number(j[1], ptr + "/1")};
}

Wedge parse_wedge(const json& j, const std::string& ptr);

HalfPlane parse_halfplane(const json& j, const std::string& ptr) {
  const Point n = point(field(j, "normal", ptr), ptr + "/normal");
  if (norm(n) == 0.0) fail(ptr + "/normal", "zero normal");
  return HalfPlane::make(n, number(field(j, "offset", ptr), ptr + "/offset"));
}

Wedge parse_wedge(const json& j, const std::string& ptr) {
  try {
    if (j.contains("theta")) {
      const double th = number(j["theta"], ptr + "/theta");
      if (!(th > 0.0 && th < 180.0)) fail(ptr + "/theta", "must lie in (0, 180)");
      const Point apex = j.contains("apex") ? point(j["apex"], ptr + "/apex") : Point{};
      return canonical_wedge(th, apex, number_or(j, "rotation", 0.0, ptr));
    }
    return wedge_from(parse_halfplane(field(j, "a", ptr), ptr + "/a"),
                      parse_halfplane(field(j, "b", ptr), ptr + "/b"));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SchemaError) throw;
    fail(ptr, e.what());
  }
}

CostModel parse_cost(const json& j, const std::string& ptr) {
  const std::string kind = text(field(j, "kind", ptr), ptr + "/kind");
  const double eta = number_or(j, "eta", 1.0, ptr);
  if (!(eta > 0.0)) fail(ptr + "/eta", "must be positive");
  if (kind == "euclidean") return CostModel::euclidean(eta);
  if (kind == "weighted") {
    const Point w = point(field(j, "weights", ptr), ptr + "/weights");
    if (!(w.x > 0.0 && w.y > 0.0)) fail(ptr + "/weights", "must be positive");
    return CostModel::weighted(w.x, w.y, eta);
  }
  fail(ptr + "/kind", "unknown cost kind '" + kind + "'");
}

struct Context {
  const std::optional<Wedge>& wedge;
  const CostModel& cost;

  const Wedge& need_wedge(const std::string& ptr) const {
    if (!wedge) fail(ptr, "requires a qualified wedge");
    return *wedge;
  }
};

// Half-planes are either literal {normal, offset} or names relative to the wedge.
HalfPlane parse_test(const json& j, const Context& ctx, const std::string& ptr) {
  if (!j.is_string()) return parse_halfplane(j, ptr);
  const std::string name = j.get<std::string>();
  const Wedge& H = ctx.need_wedge(ptr);
  if (name == "h_A") return H.a;
  if (name == "h_B") return H.b;
  if (name == "h_A+" || name == "h_B+") {
    const auto [a, b] = shifted_tests(H, ctx.cost);
    return name == "h_A+" ? a : b;
  }
  fail(ptr, "unknown test name '" + name + "'");
}

NamedMechanism parse_construction(const std::string& name, const Context& ctx, const std::string& ptr) {
  const Wedge& H = ctx.need_wedge(ptr);
  NamedMechanism nm;
  nm.name = name;
  if (name == "optimal_simultaneous") {
    nm.mechanism = optimal_simultaneous(H, ctx.cost);
  } else if (name == "optimal_fixed_order") {
    nm.mechanism = optimal_fixed_order(H, ctx.cost);
    const auto mk = stringent_markers(H, ctx.cost);
    nm.markers = {{"O", mk.O}, {"O+", mk.O_plus}, {"A", mk.A}, {"B", mk.B}};
  } else if (name == "true_simultaneous") {
    nm.mechanism = Simultaneous{H.a, H.b};
  } else if (name == "cheap_talk") {
    auto c = cheap_talk_construction(H, ctx.cost);
    nm.mechanism = c.mechanism;
    nm.markers = c.markers;
  } else if (name == "pii") {
    nm.mechanism = pii_mechanism(H, ctx.cost);
  } else if (name == "investment_random") {
    nm.mechanism = investment_random(H).mechanism;
  } else {
    fail(ptr, "unknown construction '" + name + "'");
  }
  return nm;
}

Leaf parse_leaf(const json& j, const Context& ctx, const std::string& ptr);

Sequential parse_sequential(const json& j, const Context& ctx, const std::string& ptr) {
  Sequential s;
  s.tA = parse_test(field(j, "tA", ptr), ctx, ptr + "/tA");
  s.tB = parse_test(field(j, "tB", ptr), ctx, ptr + "/tB");
  s.q = number_or(j, "q", 1.0, ptr);
  if (!(s.q >= 0.0 && s.q <= 1.0)) fail(ptr + "/q", "must lie in [0, 1]");
  const std::string d = j.contains("disclosure") ? text(j["disclosure"], ptr + "/disclosure") : "none";
  if (d == "disclose") s.disclosure = Disclosure::Disclose;
  else if (d != "none") fail(ptr + "/disclosure", "expected 'disclose' or 'none'");
  return s;
}

Leaf parse_leaf(const json& j, const Context& ctx, const std::string& ptr) {
  const std::string type = text(field(j, "type", ptr), ptr + "/type");
  if (type == "simultaneous")
    return Simultaneous{parse_test(field(j, "tA", ptr), ctx, ptr + "/tA"),
                        parse_test(field(j, "tB", ptr), ctx, ptr + "/tB")};
  if (type == "sequential") return parse_sequential(j, ctx, ptr);
  fail(ptr + "/type", "unknown leaf mechanism type '" + type + "'");
}

NamedMechanism parse_mechanism(const json& j, const Context& ctx, const std::string& ptr) {
  const std::string type = text(field(j, "type", ptr), ptr + "/type");
  NamedMechanism nm;
  if (type == "construction") {
    nm = parse_construction(text(field(j, "construction", ptr), ptr + "/construction"), ctx,
                            ptr + "/construction");
  } else if (type == "mixture") {
    const json& comps = field(j, "components", ptr);
    if (!comps.is_array() || comps.empty()) fail(ptr + "/components", "expected a non-empty array");
    Mixture mx;
    double total = 0.0;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      const std::string p = ptr + "/components/" + std::to_string(i);
      const double prob = number(field(comps[i], "prob", p), p + "/prob");
      if (prob < 0.0) fail(p + "/prob", "must be non-negative");
      total += prob;
      mx.components.push_back({parse_leaf(field(comps[i], "mechanism", p), ctx, p + "/mechanism"), prob});
    }
    if (std::abs(total - 1.0) > 1e-9) fail(ptr + "/components", "probabilities must sum to 1");
    nm.mechanism = mx;
    nm.name = "mixture";
  } else if (type == "simultaneous" || type == "sequential") {
    nm.mechanism = std::visit([](const auto& leaf) -> Mechanism { return leaf; }, parse_leaf(j, ctx, ptr));
    nm.name = type;
  } else {
    fail(ptr + "/type", "unknown mechanism type '" + type + "'");
  }
  if (j.contains("name")) nm.name = text(j["name"], ptr + "/name");
  const ValidationResult v = validate(nm.mechanism);
  if (!v.ok) fail(ptr, v.errors.front());
  return nm;
}

Distribution parse_distribution(const json& j, const std::string& ptr) {
  const std::string kind = text(field(j, "kind", ptr), ptr + "/kind");
  if (kind == "uniform") {
    const Point lo = point(field(j, "lo", ptr), ptr + "/lo"), hi = point(field(j, "hi", ptr), ptr + "/hi");
    if (!(lo.x <= hi.x && lo.y <= hi.y)) fail(ptr, "lo must not exceed hi");
    return Distribution::uniform(lo, hi);
  }
  if (kind == "point") return Distribution::point_mass(point(field(j, "at", ptr), ptr + "/at"));
  if (kind == "gaussian_mixture") {
    const json& comps = field(j, "components", ptr);
    if (!comps.is_array() || comps.empty()) fail(ptr + "/components", "expected a non-empty array");
    GaussianMixture gm;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      const std::string p = ptr + "/components/" + std::to_string(i);
      GaussianComponent c;
      c.weight = number_or(comps[i], "weight", 1.0, p);
      c.mean = point(field(comps[i], "mean", p), p + "/mean");
      const Point s = point(field(comps[i], "sigma", p), p + "/sigma");
      if (!(c.weight > 0.0 && s.x > 0.0 && s.y > 0.0)) fail(p, "weight and sigma must be positive");
      c.sx = s.x;
      c.sy = s.y;
      gm.components.push_back(c);
    }
    return Distribution{gm, std::nullopt};
  }
  if (kind == "grid") {
    const json& w = field(j, "weights", ptr);
    if (!w.is_array()) fail(ptr + "/weights", "expected an array");
    std::vector<double> weights;
    for (std::size_t i = 0; i < w.size(); ++i) weights.push_back(number(w[i], ptr + "/weights/" + std::to_string(i)));
    const double nx = number(field(j, "nx", ptr), ptr + "/nx"), ny = number(field(j, "ny", ptr), ptr + "/ny");
    try {
      return Distribution{GridDensity::from_weights(point(field(j, "origin", ptr), ptr + "/origin"),
                                                    number(field(j, "cell", ptr), ptr + "/cell"),
                                                    static_cast<std::size_t>(nx), static_cast<std::size_t>(ny),
                                                    std::move(weights)),
                          std::nullopt};
    } catch (const Error& e) {
      fail(ptr, e.what());
    }
  }
  fail(ptr + "/kind", "unknown distribution kind '" + kind + "'");
}

}  // namespace

const Wedge& Scenario::qualified() const {
  if (!wedge) fail("/wedge", "scenario has no qualified wedge");
  return *wedge;
}

Scenario parse_scenario(const json& j) {
  if (!j.is_object()) fail("", "expected an object");
  const std::string schema = text(field(j, "schema", ""), "/schema");
  if (schema != kSchemaVersion) fail("/schema", "unsupported schema '" + schema + "'");
  Scenario s;
  if (j.contains("cost")) s.cost = parse_cost(j["cost"], "/cost");
  if (j.contains("wedge")) s.wedge = parse_wedge(j["wedge"], "/wedge");
  if (j.contains("polygon")) {
    const json& p = j["polygon"];
    if (!p.is_array()) fail("/polygon", "expected an array of points");
    std::vector<Point> pts;
    for (std::size_t i = 0; i < p.size(); ++i) pts.push_back(point(p[i], "/polygon/" + std::to_string(i)));
    try {
      s.polygon = ConvexPolygon::make(std::move(pts));
    } catch (const std::invalid_argument& e) {
      fail("/polygon", e.what());
    }
  }
  if (!s.wedge && !s.polygon) fail("", "either 'wedge' or 'polygon' is required");

  const Context ctx{s.wedge, s.cost};
  if (j.contains("mechanisms")) {
    const json& ms = j["mechanisms"];
    if (!ms.is_array()) fail("/mechanisms", "expected an array");
    for (std::size_t i = 0; i < ms.size(); ++i)
      s.mechanisms.push_back(parse_mechanism(ms[i], ctx, "/mechanisms/" + std::to_string(i)));
  }
  if (j.contains("distribution")) s.distribution = parse_distribution(j["distribution"], "/distribution");
  if (j.contains("setting")) {
    const std::string v = text(j["setting"], "/setting");
    if (v == "manipulation") s.setting = Setting::Manipulation;
    else if (v == "investment") s.setting = Setting::Investment;
    else fail("/setting", "expected 'manipulation' or 'investment'");
  }
  if (j.contains("objective")) {
    const std::string v = text(j["objective"], "/objective");
    if (v == "PI") s.objective = Objective::PI;
    else if (v == "PII") s.objective = Objective::PII;
    else fail("/objective", "expected 'PI' or 'PII'");
  }
  if (j.contains("n")) {
    const double n = number(j["n"], "/n");
    if (!(n >= 1.0)) fail("/n", "must be at least 1");
    s.n = static_cast<std::size_t>(n);
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) fail("/seed", "expected a non-negative integer");
    s.seed = j["seed"].get<std::uint64_t>();
  }

  const double half = 3.0 / s.cost.eta;
  Point c = s.wedge ? s.wedge->apex : Point{};
  if (s.polygon) c = 0.5 * (s.polygon->lo() + s.polygon->hi());
  s.lo = c - Point{half, half};
  s.hi = c + Point{half, half};
  if (s.polygon) {
    s.lo = {std::min(s.lo.x, s.polygon->lo().x - 1.0 / s.cost.eta), std::min(s.lo.y, s.polygon->lo().y - 1.0 / s.cost.eta)};
    s.hi = {std::max(s.hi.x, s.polygon->hi().x + 1.0 / s.cost.eta), std::max(s.hi.y, s.polygon->hi().y + 1.0 / s.cost.eta)};
  }
  if (j.contains("window")) {
    s.lo = point(field(j["window"], "lo", "/window"), "/window/lo");
    s.hi = point(field(j["window"], "hi", "/window"), "/window/hi");
    if (!(s.lo.x < s.hi.x && s.lo.y < s.hi.y)) fail("/window", "lo must be below hi");
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SchemaError, path + ": " + e.what());
  }
  return parse_scenario(j);
}

}  // namespace screenlab::cli
