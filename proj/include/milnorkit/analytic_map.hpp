#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "milnorkit/dual.hpp"
#include "milnorkit/error.hpp"
#include "milnorkit/expression.hpp"
#include "milnorkit/linalg.hpp"

namespace milnorkit {

/// A point of R^n. Coordinates must be finite.
class Point {
 public:
  Point() = default;
  explicit Point(Vector coords) : coords_(std::move(coords)) {
    for (double c : coords_)
      if (!std::isfinite(c)) throw InputError("Point: non-finite coordinate");
  }
  Point(std::initializer_list<double> coords) : Point(Vector(coords)) {}

  static Point origin(std::size_t n) { return Point(Vector(n, 0.0)); }

  std::size_t size() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  std::span<const double> coords() const noexcept { return coords_; }
  const Vector& vector() const noexcept { return coords_; }
  double norm() const { return milnorkit::norm(coords_); }

  bool operator==(const Point&) const = default;

 private:
  Vector coords_;
};

/// The gradient matrix of G = (g_1..g_k) at x: column i of `a` is grad g_i(x)
/// (so `a` is the transpose of the derivative), and `m` = a^t a.
struct GradientFrame {
  Point x;
  Matrix a;
  Matrix m;

  std::size_t n() const noexcept { return a.rows(); }
  std::size_t k() const noexcept { return a.cols(); }
};

/// A polynomial map R^n -> R^k given by k expression trees over n variables.
class AnalyticMap {
 public:
  AnalyticMap(std::size_t n, std::vector<Expr> components, std::string label = {})
      : n_(n), components_(std::move(components)), label_(std::move(label)) {
    if (n_ == 0) throw InputError("AnalyticMap: domain dimension must be positive");
    if (components_.empty()) throw InputError("AnalyticMap: codomain dimension must be positive");
    for (const Expr& c : components_) {
      auto m = c.max_variable();
      if (m && *m >= n_)
        throw InputError("AnalyticMap: variable index " + std::to_string(*m) + " out of range for n=" +
                         std::to_string(n_));
    }
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t k() const noexcept { return components_.size(); }
  const std::vector<Expr>& components() const noexcept { return components_; }
  const std::string& label() const noexcept { return label_; }

  Vector eval(const Point& x) const {
    check_dimension(x, "eval");
    Vector out;
    out.reserve(k());
    for (const Expr& c : components_) out.push_back(c.evaluate<double>(x.coords()));
    return out;
  }

  /// Gradients by forward-mode dual propagation: exact up to roundoff.
  GradientFrame gradient_frame(const Point& x) const {
    check_dimension(x, "gradient_frame");
    std::vector<Dual> vars;
    vars.reserve(n_);
    for (std::size_t i = 0; i < n_; ++i) vars.push_back(Dual::variable(x[i], i, n_));
    Matrix a(n_, k());
    for (std::size_t j = 0; j < k(); ++j) {
      const Dual d = components_[j].evaluate<Dual>(vars);
      for (std::size_t i = 0; i < n_; ++i) a(i, j) = d.partial(i);
    }
    Matrix m = gram(a);
    return {x, std::move(a), std::move(m)};
  }

  bool operator==(const AnalyticMap& o) const {
    return n_ == o.n_ && label_ == o.label_ && components_ == o.components_;
  }

 private:
  void check_dimension(const Point& x, const char* op) const {
    if (x.size() != n_)
      throw InputError(std::string(op) + ": point has dimension " + std::to_string(x.size()) + ", map expects " +
                       std::to_string(n_));
  }

  std::size_t n_;
  std::vector<Expr> components_;
  std::string label_;
};

inline Vector eval(const AnalyticMap& map, const Point& x) { return map.eval(x); }
inline GradientFrame gradient_frame(const AnalyticMap& map, const Point& x) { return map.gradient_frame(x); }

/// outer o inner, by substituting inner's components for outer's variables.
inline AnalyticMap compose(const AnalyticMap& outer, const AnalyticMap& inner) {
  if (inner.k() != outer.n())
    throw InputError("compose: inner codomain " + std::to_string(inner.k()) + " != outer domain " +
                     std::to_string(outer.n()));
  std::vector<Expr> comps;
  comps.reserve(outer.k());
  for (const Expr& c : outer.components()) comps.push_back(c.substitute(inner.components()));
  return AnalyticMap(inner.n(), std::move(comps), outer.label() + " o " + inner.label());
}

inline AnalyticMap identity_map(std::size_t n) {
  std::vector<Expr> comps;
  for (std::size_t i = 0; i < n; ++i) comps.push_back(Expr::variable(i));
  return AnalyticMap(n, std::move(comps), "identity");
}

/// The normed power map y -> |y|^(p-1) y on R^k, p odd.
inline AnalyticMap nap_map(std::size_t k, unsigned p) {
  if (k == 0) throw InputError("nap_map: k must be positive");
  if (p == 0 || p % 2 == 0) throw InputError("nap_map: p must be an odd positive integer");
  std::vector<Expr> squares;
  for (std::size_t i = 0; i < k; ++i) squares.push_back(Expr::power(Expr::variable(i), 2));
  const Expr radial = Expr::power(Expr::sum(std::move(squares)), (p - 1) / 2);
  std::vector<Expr> comps;
  for (std::size_t i = 0; i < k; ++i) comps.push_back(Expr::product({radial, Expr::variable(i)}));
  return AnalyticMap(k, std::move(comps), "nap(k=" + std::to_string(k) + ",p=" + std::to_string(p) + ")");
}

/// Real and imaginary parts of (g1 + i h1)(g2 + i h2). With `disjoint`, f2 is
/// moved to its own variable block after f1's.
inline AnalyticMap product_pair(const AnalyticMap& f1, const AnalyticMap& f2, bool disjoint) {
  if (f1.k() != 2 || f2.k() != 2) throw InputError("product_pair: both factors must have k=2");
  std::size_t n = f1.n();
  Expr g2 = f2.components()[0];
  Expr h2 = f2.components()[1];
  if (disjoint) {
    g2 = g2.shift_variables(f1.n());
    h2 = h2.shift_variables(f1.n());
    n = f1.n() + f2.n();
  } else if (f1.n() != f2.n()) {
    throw InputError("product_pair: shared-variable factors must have equal n");
  }
  const Expr& g1 = f1.components()[0];
  const Expr& h1 = f1.components()[1];
  std::vector<Expr> comps{g1 * g2 - h1 * h2, g1 * h2 + h1 * g2};
  return AnalyticMap(n, std::move(comps), "(" + f1.label() + ")*(" + f2.label() + ")");
}

/// x -> matrix * x for a k x n matrix; row i gives component g_i.
inline AnalyticMap linear_map(const Matrix& matrix) {
  if (matrix.rows() == 0 || matrix.cols() == 0) throw InputError("linear_map: empty matrix");
  std::vector<Expr> comps;
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    std::vector<Expr> terms;
    for (std::size_t j = 0; j < matrix.cols(); ++j)
      terms.push_back(Expr::product({Expr::constant(matrix(i, j)), Expr::variable(j)}));
    comps.push_back(Expr::sum(std::move(terms)));
  }
  return AnalyticMap(matrix.cols(), std::move(comps), "linear");
}

}  // namespace milnorkit
