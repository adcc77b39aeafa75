#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace tcpgds {

// Seeded random source. All randomness in the library flows through this
// wrapper; the uniform mapping from raw engine output is pinned here (instead
// of std distribution classes, whose output is implementation-defined) so a
// recorded seed replays the same stream everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  std::vector<double> uniform_vector(std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (double& x : v) x = uniform(lo, hi);
    return v;
  }

  // Standard normal via Box-Muller.
  double normal() {
    double u1 = 1.0 - uniform01();  // (0, 1], keeps the log finite
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  // Uniformly distributed direction on the unit sphere in R^n.
  std::vector<double> unit_vector(std::size_t n) {
    std::vector<double> v(n);
    while (true) {
      double s = 0.0;
      for (double& x : v) {
        x = normal();
        s += x * x;
      }
      if (s > 1e-24) {
        double inv = 1.0 / std::sqrt(s);
        for (double& x : v) x *= inv;
        return v;
      }
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace tcpgds
