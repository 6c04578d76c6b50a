#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>

#include "screenlab/geometry.hpp"

namespace screenlab {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based stream: sample i of run `seed` always sees the same numbers,
// whichever thread draws it.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t state) : state_(state) {}
  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    return Rng(splitmix64(splitmix64(seed) ^ (index * 0xd1b54a32d192ed03ULL)));
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return splitmix64(state_);
  }

  // Explicit conversions keep draws identical across standard libraries.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }
  Point in_box(Point lo, Point hi) { return {uniform(lo.x, hi.x), uniform(lo.y, hi.y)}; }

 private:
  std::uint64_t state_;
};

using Sampler = std::function<Point(Rng&)>;

inline Sampler box_sampler(Point lo, Point hi) {
  return [lo, hi](Rng& rng) { return rng.in_box(lo, hi); };
}

inline Sampler centered_sampler(Point center, double half_width) {
  return box_sampler(center - Point{half_width, half_width}, center + Point{half_width, half_width});
}

}  // namespace screenlab
