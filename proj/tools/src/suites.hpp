#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "report.hpp"

namespace screenlab::cli {

struct Claim {
  std::string id;
  std::string anchor;  // the statement being checked
  bool pass = false;
  json metrics = json::object();
  json witnesses = json::array();
};

struct SuiteResult {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<Claim> claims;

  bool pass() const;
};

struct SuiteOptions {
  std::optional<std::size_t> n;  // overrides every per-claim sample count
};

const std::vector<std::string>& suite_names();

// Throws Error(UnknownSuite).
SuiteResult run_suite(const std::string& name, std::uint64_t seed, const SuiteOptions& opts = {});

json to_json(const SuiteResult& r);

// Wedge of the running example: h_A = {x >= 1}, h_B bounded by the line of slope
// 3/4 through (1, 1).
Wedge example_wedge();

}  // namespace screenlab::cli
