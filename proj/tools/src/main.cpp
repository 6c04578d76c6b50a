#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "report.hpp"
#include "scenario.hpp"
#include "suites.hpp"
#include "svg.hpp"
#include "screenlab/errors.hpp"
#include "screenlab/oracle.hpp"
#include "screenlab/regions.hpp"

using namespace screenlab;
using namespace screenlab::cli;

namespace {

struct Options {
  std::string scenario;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n;
  std::optional<double> delta;
  std::size_t mechanism = 0;
};

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot write " + out);
  f << text;
}

void emit(const json& j, const std::string& out) { emit(j.dump(2) + "\n", out); }

Scenario load(const Options& o) {
  Scenario s = load_scenario(o.scenario);
  if (o.seed) s.seed = *o.seed;
  if (o.n) s.n = *o.n;
  return s;
}

const NamedMechanism& pick(const Scenario& s, std::size_t i) {
  if (i >= s.mechanisms.size())
    throw Error(ErrorCode::SchemaError, "/mechanisms/" + std::to_string(i) + ": no such mechanism");
  return s.mechanisms[i];
}

GridSpec oracle_grid(const Scenario& s, const Options& o) {
  GridSpec g = default_grid(s.qualified().apex, s.cost.eta);
  if (o.delta) g.delta = *o.delta;
  return g;
}

json scenario_header(const Scenario& s) {
  json j = {{"schema", kSchemaVersion},
            {"setting", to_string(s.setting)},
            {"objective", to_string(s.objective)},
            {"cost", {{"kind", to_string(s.cost.kind)}, {"eta", s.cost.eta}}},
            {"n", s.n},
            {"seed", s.seed}};
  if (s.wedge) j["wedge"] = to_json(*s.wedge);
  if (s.polygon) j["polygon"] = to_json(*s.polygon);
  return j;
}

int cmd_best_response(const Options& o, Point x, bool oracle) {
  const Scenario s = load(o);
  json j = scenario_header(s);
  j["x"] = to_json(x);
  json results = json::array();
  if (s.polygon && s.mechanisms.empty()) {
    const ErodedRegion Q = erode(*s.polygon, 1.0 / s.cost.eta);
    results.push_back({{"name", "adaptive"}, {"best_response", to_json(perfect_best_response(x, *s.polygon, Q, s.cost.eta))}});
  }
  for (const auto& nm : s.mechanisms) {
    json r = {{"name", nm.name}, {"best_response", to_json(best_response(x, nm.mechanism, s.setting, s.cost))}};
    if (oracle) {
      const OracleResult g = grid_best_response(x, nm.mechanism, s.setting, s.cost, oracle_grid(s, o));
      r["oracle"] = {{"best_response", to_json(g.br)}, {"delta", g.delta}, {"coarsened", g.coarsened}};
      if (!g.warning.empty()) std::cerr << "warning: " << g.warning << "\n";
    }
    results.push_back(r);
  }
  j["results"] = results;
  emit(j, o.out);
  return 0;
}

// Tests whose manipulation sets the region/plot commands draw.
std::tuple<HalfPlane, HalfPlane, double> region_tests(const Scenario& s, const Options& o) {
  if (s.mechanisms.empty()) {
    const auto [a, b] = shifted_tests(s.qualified(), s.cost);
    return {a, b, 1.0};
  }
  const Mechanism& m = pick(s, o.mechanism).mechanism;
  if (const auto* q = std::get_if<Sequential>(&m)) return {q->tA, q->tB, q->q};
  if (const auto* p = std::get_if<Simultaneous>(&m)) return {p->tA, p->tB, 1.0};
  throw Error(ErrorCode::SchemaError, "/mechanisms/" + std::to_string(o.mechanism) +
                                          ": region sets need a simultaneous or sequential mechanism");
}

int cmd_region(const Options& o, const std::string& set_name, std::optional<double> q, bool oracle, double cell) {
  const Scenario s = load(o);
  if (oracle) {
    const Occupancy occ = oracle_region(pick(s, o.mechanism).mechanism, s.setting, s.cost, oracle_grid(s, o), cell);
    emit(occ.to_csv(), o.out);
    return 0;
  }
  const RegionSet set = parse_region_set(set_name);
  const auto [tA, tB, mq] = region_tests(s, o);
  const RegionSpec spec = canonical_region_spec(tA, tB, q.value_or(mq), s.cost.eta, StripAnchor::TrueTests, s.wedge);
  std::ostringstream os;
  os << "x,y,member\n";
  const std::size_t nx = static_cast<std::size_t>(std::ceil((s.hi.x - s.lo.x) / cell));
  const std::size_t ny = static_cast<std::size_t>(std::ceil((s.hi.y - s.lo.y) / cell));
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) {
      const Point c = s.lo + Point{(i + 0.5) * cell, (j + 0.5) * cell};
      os << c.x << "," << c.y << "," << (member(spec, set, c) ? 1 : 0) << "\n";
    }
  emit(os.str(), o.out);
  return 0;
}

int cmd_evaluate(const Options& o) {
  const Scenario s = load(o);
  json j = scenario_header(s);
  json results = json::array();
  for (const auto& nm : s.mechanisms) {
    json r = {{"name", nm.name}, {"mechanism", to_json(nm.mechanism)}};
    r["report"] = to_json(evaluate(nm.mechanism, s.qualified(), s.distribution, s.setting, s.cost, s.objective, s.n, s.seed));
    try {
      r["analytic_feasibility"] =
          to_json(feasibility(nm.mechanism, s.qualified(), s.setting, s.cost, FeasibilityMethod::Analytic));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::MethodUnavailable) throw;
      r["analytic_feasibility"] = nullptr;
    }
    results.push_back(r);
  }
  j["results"] = results;
  emit(j, o.out);
  return 0;
}

int cmd_compare(const Options& o, std::size_t a, std::size_t b) {
  const Scenario s = load(o);
  const auto& ma = pick(s, a);
  const auto& mb = pick(s, b);
  json j = scenario_header(s);
  j["a"] = ma.name;
  j["b"] = mb.name;
  j["dominance"] = to_json(dominance_compare(ma.mechanism, mb.mechanism, s.distribution.sampler(), s.setting,
                                             s.cost, s.n, s.seed));
  emit(j, o.out);
  return 0;
}

int cmd_verify(const Options& o, const std::string& suite) {
  SuiteOptions opts;
  opts.n = o.n;
  const std::uint64_t seed = o.seed.value_or(7);
  json j;
  bool pass = true;
  if (suite == "all") {
    json all = json::array();
    for (const auto& name : suite_names()) {
      const SuiteResult r = run_suite(name, seed, opts);
      pass = pass && r.pass();
      all.push_back(to_json(r));
    }
    j = {{"schema", kSchemaVersion}, {"seed", seed}, {"pass", pass}, {"suites", all}};
  } else {
    const SuiteResult r = run_suite(suite, seed, opts);
    pass = r.pass();
    j = to_json(r);
  }
  emit(j, o.out);
  // Human summary on stderr so stdout stays machine-readable.
  const json suites = j.contains("suites") ? j["suites"] : json::array({j});
  for (const auto& sr : suites)
    for (const auto& c : sr["claims"])
      std::cerr << (c["pass"].get<bool>() ? "PASS " : "FAIL ") << c["id"].get<std::string>() << "  ["
                << c["anchor"].get<std::string>() << "]\n";
  return pass ? 0 : 1;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string part; std::getline(ss, part, sep);)
    if (!part.empty()) out.push_back(part);
  return out;
}

int cmd_plot(const Options& o, const std::string& layers) {
  const Scenario s = load(o);
  SvgPlot plot(s.lo, s.hi);
  const int cells = 200;
  for (const auto& layer : split(layers, ',')) {
    const auto parts = split(layer, ':');
    const std::string name = parts.empty() ? layer : parts.front();
    std::optional<double> arg;
    if (parts.size() > 1) arg = std::stod(parts[1]);
    if (name == "wedge") {
      plot.polygon(clip_to_box(s.qualified(), s.lo - Point{1, 1}, s.hi + Point{1, 1}).vertices, "#4caf50", "#2e7d32", 0.25);
      plot.legend("qualified H", "#4caf50");
    } else if (name == "tests") {
      const CheapTalkMenu* menu = s.mechanisms.empty() ? nullptr : std::get_if<CheapTalkMenu>(&pick(s, o.mechanism).mechanism);
      if (menu) {
        // A menu announces one pair per report region plus the fallback pair.
        std::vector<Sequential> pairs{menu->fallback};
        for (const auto& e : menu->entries) pairs.push_back(e.mechanism);
        for (const auto& p : pairs) {
          plot.boundary(p.tA, "#1565c0", true);
          plot.boundary(p.tB, "#6a1b9a", true);
        }
      } else {
        const auto [tA, tB, q] = region_tests(s, o);
        (void)q;
        plot.boundary(tA, "#1565c0", true);
        plot.boundary(tB, "#6a1b9a", true);
      }
      plot.legend("announced tests", "#1565c0");
    } else if (name == "shifted") {
      const auto [a, b] = shifted_tests(s.qualified(), s.cost);
      plot.boundary(a, "#ef6c00", true);
      plot.boundary(b, "#ef6c00", true);
      plot.legend("h_A+, h_B+", "#ef6c00");
    } else if (name == "markers") {
      plot.marker(s.qualified().apex, "O");
      if (!s.mechanisms.empty())
        for (const auto& mk : pick(s, o.mechanism).markers)
          if (mk.name != "O") plot.marker(mk.point, mk.name);
    } else if (name == "occupancy") {
      const Occupancy occ = oracle_region(pick(s, o.mechanism).mechanism, s.setting, s.cost, oracle_grid(s, o),
                                          arg.value_or(0.05));
      plot.heat(occ.lo, occ.cell, occ.nx, occ.ny, occ.prob, "#37474f");
      plot.legend("oracle acceptance", "#555");
    } else if (name == "cheap-talk") {
      plot.polygon(cheap_talk_region(s.qualified(), s.cost), "#fdd835", "#f9a825", 0.5);
      plot.legend("rotated-procedure reports", "#fdd835");
    } else if (name == "perfect") {
      if (!s.polygon) throw Error(ErrorCode::SchemaError, "/polygon: the perfect layer needs a polygon");
      const ErodedRegion Q = erode(*s.polygon, 1.0 / s.cost.eta);
      plot.polygon(s.polygon->vertices, "#4caf50", "#2e7d32", 0.2);
      plot.legend("H", "#4caf50");
      if (!Q.empty()) {
        plot.polygon(Q.Q->vertices, "#1e88e5", "#1565c0", 0.35);
        plot.legend("Q", "#1e88e5");
        const double r = arg.value_or(0.5 / s.cost.eta), w = (s.hi.x - s.lo.x) / cells;
        plot.raster([&](Point p) { return std::abs(Q.Q->distance(p) - r) <= w / 2; }, cells, "#e53935", 0.8);
        plot.legend("ring", "#e53935");
      }
    } else {
      const RegionSet set = parse_region_set(name);
      const auto [tA, tB, mq] = region_tests(s, o);
      const RegionSpec spec = canonical_region_spec(tA, tB, arg.value_or(mq), s.cost.eta, StripAnchor::TrueTests, s.wedge);
      plot.raster([&](Point p) { return member(spec, set, p); }, cells, "#e53935");
      plot.legend(layer, "#e53935");
    }
  }
  if (o.out.empty()) std::cout << plot.str();
  else plot.write(o.out);
  return 0;
}

Point parse_point(const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.size() != 2) throw CLI::ValidationError("--x", "expected 'x,y'");
  return {std::stod(parts[0]), std::stod(parts[1])};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"screenlab: screening-mechanism scenarios, verification suites and plots"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sub, bool scenario) {
    if (scenario) sub->add_option("scenario", o.scenario, "scenario JSON")->required();
    sub->add_option("--seed", o.seed, "random seed");
    sub->add_option("--n", o.n, "sample count");
    sub->add_option("--out", o.out, "output file (default stdout)");
    sub->add_option("--delta", o.delta, "oracle lattice spacing");
  };

  std::string x_text;
  bool oracle = false;
  auto* br = app.add_subcommand("best-response", "best response of a type to every mechanism");
  common(br, true);
  br->add_option("--x", x_text, "type as 'x,y'")->required();
  br->add_flag("--oracle", oracle, "also run the lattice oracle");
  br->add_option("--mechanism", o.mechanism, "mechanism index");

  std::string set_name = "Mq";
  std::optional<double> q;
  double cell = 0.05;
  auto* region = app.add_subcommand("region", "membership or oracle occupancy grid as CSV");
  common(region, true);
  region->add_option("--set", set_name, "Astrip|Bstrip|BO|Cq|Dq|Omega|QualifiedWedge|Mq");
  region->add_option("--q", q, "first-test probability (default: the mechanism's)");
  region->add_flag("--oracle", oracle, "occupancy from lattice best responses");
  region->add_option("--cell", cell, "cell size")->check(CLI::PositiveNumber);
  region->add_option("--mechanism", o.mechanism, "mechanism index");

  auto* ev = app.add_subcommand("evaluate", "evaluate every mechanism of a scenario");
  common(ev, true);

  std::size_t a = 0, b = 1;
  auto* cmp = app.add_subcommand("compare", "pointwise dominance between two mechanisms");
  common(cmp, true);
  cmp->add_option("--a", a, "first mechanism index");
  cmp->add_option("--b", b, "second mechanism index");

  std::string suite;
  auto* ver = app.add_subcommand("verify", "run a verification suite (or 'all')");
  common(ver, false);
  ver->add_option("suite", suite, "suite name")->required();

  std::string layers;
  auto* plt = app.add_subcommand("plot", "render scenario layers as SVG");
  common(plt, true);
  plt->add_option("--layers", layers,
                  "comma list: wedge,tests,shifted,markers,occupancy[:cell],cheap-talk,perfect[:r],<set>[:q]");
  plt->add_option("--mechanism", o.mechanism, "mechanism index");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Usage errors share the input-error exit code; --help still exits 0.
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*br) return cmd_best_response(o, parse_point(x_text), oracle);
    if (*region) return cmd_region(o, set_name, q, oracle, cell);
    if (*ev) return cmd_evaluate(o);
    if (*cmp) return cmd_compare(o, a, b);
    if (*ver) return cmd_verify(o, suite);
    if (*plt) return cmd_plot(o, layers);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::SchemaError:
      case ErrorCode::IoError:
      case ErrorCode::UnknownSuite:
      case ErrorCode::UnknownSet:
        return 2;
      default:
        return 3;
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
