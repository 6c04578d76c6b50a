#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "screenlab/constructions.hpp"
#include "screenlab/costs.hpp"
#include "screenlab/evaluation.hpp"
#include "screenlab/mechanisms.hpp"
#include "screenlab/perfect_tests.hpp"

namespace screenlab::cli {

struct NamedMechanism {
  std::string name;
  Mechanism mechanism;
  std::vector<Marker> markers;
};

struct Scenario {
  std::optional<Wedge> wedge;
  std::optional<ConvexPolygon> polygon;  // perfect-test scenarios
  CostModel cost = CostModel::euclidean(1.0);
  std::vector<NamedMechanism> mechanisms;
  Distribution distribution = Distribution::uniform({-2.0, -2.0}, {2.0, 2.0});
  Setting setting = Setting::Manipulation;
  Objective objective = Objective::PI;
  std::size_t n = 100000;
  std::uint64_t seed = 1;
  // Plot and sampling window; defaults to the apex (or polygon) +- 3/eta.
  Point lo;
  Point hi;

  const Wedge& qualified() const;  // throws SchemaError when absent
};

// Both throw Error(SchemaError) with a JSON pointer to the offending field.
Scenario parse_scenario(const nlohmann::json& j);
Scenario load_scenario(const std::string& path);  // IoError when unreadable

}  // namespace screenlab::cli
