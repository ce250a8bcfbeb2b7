#pragma once

#include <string>
#include <utility>
#include <vector>

#include "milnorkit/analytic_map.hpp"

namespace milnorkit::corpus {

inline Expr x() { return Expr::variable(0); }
inline Expr y() { return Expr::variable(1); }
inline Expr c(double v) { return Expr::constant(v); }

inline AnalyticMap labeled(AnalyticMap m, std::string label) {
  return AnalyticMap(m.n(), m.components(), std::move(label));
}

/// Real and imaginary parts of z^d, z = x + iy, d >= 1.
inline AnalyticMap z_power(unsigned d) {
  const AnalyticMap z(2, {x(), y()}, "z");
  AnalyticMap acc = z;
  for (unsigned i = 1; i < d; ++i) acc = product_pair(acc, z, false);
  return labeled(acc, "z^" + std::to_string(d));
}

/// Re and Im of conj(z) w^2 on R^4 = (x, y, u, v).
inline AnalyticMap zbar_w2() {
  const AnalyticMap zbar(2, {x(), -y()}, "conj(z)");
  return labeled(product_pair(zbar, z_power(2), true), "conj(z) w^2");
}

inline AnalyticMap linear_1234() { return labeled(linear_map(Matrix::from_rows({{1, 2}, {3, 4}})), "linear [[1,2],[3,4]]"); }

inline AnalyticMap shear() { return labeled(linear_map(Matrix::from_rows({{1, 1}, {0, 1}})), "linear [[1,1],[0,1]]"); }

inline AnalyticMap shear_z2() { return labeled(compose(shear(), z_power(2)), "shear o z^2"); }

/// (x^2 + y^2, x): gradients dependent along y = 0 where f != 0.
inline AnalyticMap x2y2_x() {
  return AnalyticMap(2, {Expr::power(x(), 2) + Expr::power(y(), 2), x()}, "(x^2+y^2, x)");
}

inline AnalyticMap x_xy() { return AnalyticMap(2, {x(), x() * y()}, "(x, xy)"); }

inline AnalyticMap x_y3() { return AnalyticMap(2, {x(), Expr::power(y(), 3)}, "(x, y^3)"); }

/// (x + y, 2x + 2y): parallel gradients everywhere.
inline AnalyticMap parallel() { return AnalyticMap(2, {x() + y(), c(2) * x() + c(2) * y()}, "(x+y, 2x+2y)"); }

inline AnalyticMap identity2() { return identity_map(2); }

/// Name -> map for every bundled corpus member.
inline std::vector<std::pair<std::string, AnalyticMap>> all() {
  return {
      {"identity", identity2()},
      {"z2", z_power(2)},
      {"z3", z_power(3)},
      {"z4", z_power(4)},
      {"zbar_w2", zbar_w2()},
      {"shear_z2", shear_z2()},
      {"linear_1234", linear_1234()},
      {"x2y2_x", x2y2_x()},
      {"x_xy", x_xy()},
      {"x_y3", x_y3()},
      {"parallel", parallel()},
      {"nap_k2_p3", nap_map(2, 3)},
      {"nap_k2_p5", nap_map(2, 5)},
      {"nap_k3_p3", nap_map(3, 3)},
      {"nap_k3_p5", nap_map(3, 5)},
  };
}

}  // namespace milnorkit::corpus
