#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace milnorkit {

/// Seeded generator with portable output. std::mt19937_64 is fully specified
/// by the standard, but the std:: distributions are not, so uniform and normal
/// draws are derived here from raw engine output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1u;
    return lo + static_cast<std::int64_t>(engine_() % span);
  }

  /// Standard normal via Box-Muller (one value per call; the pair's second half is dropped).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Uniformly distributed on the unit sphere of R^n.
  std::vector<double> unit_vector(std::size_t n) {
    std::vector<double> v(n);
    while (true) {
      double s = 0.0;
      for (double& c : v) {
        c = normal();
        s += c * c;
      }
      if (s > 1e-200) {
        const double inv = 1.0 / std::sqrt(s);
        for (double& c : v) c *= inv;
        return v;
      }
    }
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace milnorkit
