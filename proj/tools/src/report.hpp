#pragma once

#include <json.hpp>

#include "screenlab/best_response.hpp"
#include "screenlab/evaluation.hpp"
#include "screenlab/mechanisms.hpp"
#include "screenlab/perfect_tests.hpp"
#include "screenlab/regions.hpp"

namespace screenlab::cli {

using json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "screenlab/1";

json to_json(Point p);
json to_json(const HalfPlane& h);
json to_json(const Wedge& w);
json to_json(const Strategy& s);
json to_json(const BestResponse& br);
json to_json(const Leaf& m);
json to_json(const Mechanism& m);
json to_json(const Estimate& e);
json to_json(const EvalReport& r);
json to_json(const FeasibilityResult& r);
json to_json(const DominanceResult& r);
json to_json(const InclusionResult& r);
json to_json(const ConditionOReport& r);
json to_json(const CriterionReport& r);
json to_json(const ConvexPolygon& p);
json points_json(const std::vector<Point>& pts);

}  // namespace screenlab::cli
