#pragma once

// Seeded generators for randomized property checks.

#include <cstddef>
#include <vector>

#include "milnorkit/analytic_map.hpp"
#include "milnorkit/linalg.hpp"
#include "milnorkit/random.hpp"

namespace milnorkit::gen {

/// Entries uniform in [-1, 1].
inline Matrix matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.uniform(-1.0, 1.0);
  return m;
}

/// n x k with orthogonal columns of a common length in [0.1, 10] (requires k <= n).
inline Matrix orthogonal_equal_frame(Rng& rng, std::size_t n, std::size_t k) {
  std::vector<Vector> cols;
  while (cols.size() < k) {
    Vector v = rng.unit_vector(n);
    for (const Vector& q : cols) {
      const double c = dot(q, v);
      for (std::size_t i = 0; i < n; ++i) v[i] -= c * q[i];
    }
    const double vn = norm(v);
    if (vn < 1e-3) continue;
    for (double& x : v) x /= vn;
    cols.push_back(std::move(v));
  }
  const double len = rng.uniform(0.1, 10.0);
  for (Vector& c : cols)
    for (double& x : c) x *= len;
  return Matrix::from_columns(cols);
}

/// A random polynomial in n variables: `terms` monomials with coefficients in
/// [-1, 1] and total degree at most max_degree.
inline Expr polynomial(Rng& rng, std::size_t n, unsigned max_degree, std::size_t terms) {
  std::vector<Expr> sum;
  for (std::size_t t = 0; t < terms; ++t) {
    std::vector<Expr> factors{Expr::constant(rng.uniform(-1.0, 1.0))};
    unsigned budget = static_cast<unsigned>(rng.uniform_int(0, max_degree));
    while (budget > 0) {
      const auto var = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1));
      const auto e = static_cast<std::uint32_t>(rng.uniform_int(1, budget));
      factors.push_back(Expr::power(Expr::variable(var), e));
      budget -= e;
    }
    sum.push_back(Expr::product(std::move(factors)));
  }
  return Expr::sum(std::move(sum));
}

inline AnalyticMap polynomial_map(Rng& rng, std::size_t n, std::size_t k, unsigned max_degree, std::size_t terms = 4) {
  std::vector<Expr> comps;
  for (std::size_t i = 0; i < k; ++i) comps.push_back(polynomial(rng, n, max_degree, terms));
  return AnalyticMap(n, std::move(comps), "random polynomial");
}

inline Point point(Rng& rng, std::size_t n, double scale = 1.0) {
  Vector v(n);
  for (double& c : v) c = rng.uniform(-scale, scale);
  return Point(std::move(v));
}

}  // namespace milnorkit::gen
