#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "screenlab/best_response.hpp"
#include "screenlab/costs.hpp"
#include "screenlab/geometry.hpp"
#include "screenlab/mechanisms.hpp"

namespace screenlab {

// Lattice lo + (i*delta, j*delta) covering [lo, hi].
struct GridSpec {
  Point lo;
  Point hi;
  double delta = 0.01;

  std::size_t nx() const;
  std::size_t ny() const;
  std::size_t size() const { return nx() * ny(); }
  Point at(std::size_t i, std::size_t j) const { return lo + Point{i * delta, j * delta}; }
  bool valid() const;

  static GridSpec around(Point center, double half_width, double delta);
};

// Half-width 3/eta around the apex, spacing 0.01/eta.
GridSpec default_grid(Point apex, double eta);

inline constexpr std::size_t kMaxOraclePairs = 10'000'000;

struct OracleResult {
  BestResponse br;
  double delta = 0.0;  // spacing actually used
  bool coarsened = false;
  std::string warning;
};

// Lattice-exhaustive best response. Euclidean costs use exact distance transforms
// of the test masks; other costs enumerate lattice pairs (capped, coarsening).
OracleResult grid_best_response(Point x, const Mechanism& m, Setting setting, const CostModel& cm,
                                const GridSpec& grid);

struct GridPath {
  double cost = 0.0;
  Point x1;
  Point x2;
};

// min over lattice x1 in `first`, x2 in `second` of eta(|x - x1| + |x1 - x2|), whole grid.
GridPath grid_sequential_cost(Point x, const HalfPlane& first, const HalfPlane& second, const GridSpec& grid,
                              double eta = 1.0);

struct Occupancy {
  Point lo;
  double cell = 0.05;
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::vector<double> prob;  // row-major, cell centres lo + ((i+.5)cell, (j+.5)cell)

  Point center(std::size_t i, std::size_t j) const { return lo + Point{(i + 0.5) * cell, (j + 0.5) * cell}; }
  double at(std::size_t i, std::size_t j) const { return prob[j * nx + i]; }
  std::string to_csv() const;
};

// Acceptance probability of the lattice best response at each cell centre.
Occupancy oracle_region(const Mechanism& m, Setting setting, const CostModel& cm, const GridSpec& grid,
                        double cell);

namespace detail {
// Squared lattice distance to the nearest set cell and its flat index (-1 if none).
struct DistanceField {
  std::vector<double> d2;
  std::vector<long> nearest;
};
DistanceField distance_transform(const std::vector<char>& mask, std::size_t nx, std::size_t ny);
}  // namespace detail

}  // namespace screenlab
