#pragma once

#include <cstddef>
#include <vector>

namespace milnorkit {

/// Forward-mode dual number carrying a value and its gradient with respect to
/// the ambient coordinates. An empty partials vector stands for the zero
/// gradient, so constants cost no allocation.
struct Dual {
  double value = 0.0;
  std::vector<double> partials;

  Dual() = default;
  Dual(double v) : value(v) {}  // NOLINT: constants lift implicitly
  Dual(double v, std::vector<double> d) : value(v), partials(std::move(d)) {}

  /// The i-th coordinate function of an n-dimensional space, valued at v.
  static Dual variable(double v, std::size_t i, std::size_t n) {
    std::vector<double> d(n, 0.0);
    d[i] = 1.0;
    return {v, std::move(d)};
  }

  double partial(std::size_t i) const { return i < partials.size() ? partials[i] : 0.0; }
};

namespace detail {

// out = a*da + b*db with missing partials treated as zero.
inline std::vector<double> combine(double a, const std::vector<double>& da, double b,
                                   const std::vector<double>& db) {
  if (da.empty() && db.empty()) return {};
  const std::size_t n = da.size() > db.size() ? da.size() : db.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = i < da.size() ? da[i] : 0.0;
    const double y = i < db.size() ? db[i] : 0.0;
    out[i] = a * x + b * y;
  }
  return out;
}

}  // namespace detail

inline Dual operator+(const Dual& a, const Dual& b) {
  return {a.value + b.value, detail::combine(1.0, a.partials, 1.0, b.partials)};
}

inline Dual operator-(const Dual& a) {
  std::vector<double> d(a.partials.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = -a.partials[i];
  return {-a.value, std::move(d)};
}

inline Dual operator*(const Dual& a, const Dual& b) {
  // product rule: (ab)' = b a' + a b'
  return {a.value * b.value, detail::combine(b.value, a.partials, a.value, b.partials)};
}

}  // namespace milnorkit
