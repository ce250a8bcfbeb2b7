#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "milnorkit/analytic_map.hpp"
#include "milnorkit/error.hpp"
#include "milnorkit/random.hpp"

namespace milnorkit {

/// A sampled ball around `center`: for each level j = 0..radial_levels-1,
/// `directions_per_level` points at distance radius * 2^-j along seeded
/// uniform directions. The sample set is a pure function of these fields, and
/// the samples for L levels are a prefix of those for L+1 levels.
struct RegionSpec {
  Point center;
  double radius = 0.5;
  std::size_t radial_levels = 32;
  std::size_t directions_per_level = 64;
  std::uint64_t seed = 42;

  static RegionSpec ball(Point center, double radius, std::size_t levels = 32, std::size_t directions = 64,
                         std::uint64_t seed = 42) {
    return {std::move(center), radius, levels, directions, seed};
  }
};

inline std::vector<Point> sample_region(const RegionSpec& region) {
  if (!(region.radius > 0.0) || !std::isfinite(region.radius)) throw InputError("sample_region: radius must be positive");
  if (region.radial_levels < 1 || region.directions_per_level < 1)
    throw InputError("sample_region: levels and directions must be at least 1");
  if (region.center.size() == 0) throw InputError("sample_region: center has no coordinates");
  const std::size_t n = region.center.size();
  Rng rng(region.seed);
  std::vector<Point> out;
  out.reserve(region.radial_levels * region.directions_per_level);
  for (std::size_t j = 0; j < region.radial_levels; ++j) {
    const double r = std::ldexp(region.radius, -static_cast<int>(j));
    for (std::size_t d = 0; d < region.directions_per_level; ++d) {
      const Vector u = rng.unit_vector(n);
      Vector x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = region.center[i] + r * u[i];
      out.emplace_back(std::move(x));
    }
  }
  return out;
}

}  // namespace milnorkit
