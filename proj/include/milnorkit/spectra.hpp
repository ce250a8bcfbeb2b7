#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "milnorkit/analytic_map.hpp"
#include "milnorkit/error.hpp"
#include "milnorkit/linalg.hpp"
#include "milnorkit/random.hpp"

namespace milnorkit {

/// Eigenvalues at or below this are exact zeros for determinant purposes.
inline constexpr double kZeroEigenvalue = 1e-300;
/// Gram traces at or below this mean the derivative vanishes.
inline constexpr double kZeroTrace = 1e-300;

/// Singular values of an n x k matrix, descending, with the trace and
/// determinant of its Gram matrix.
struct SingularSpectrum {
  Vector sigmas;
  double trace = 0.0;
  double det_gram = 0.0;

  double sigma_max() const { return sigmas.empty() ? 0.0 : sigmas.front(); }
  double sigma_min() const { return sigmas.empty() ? 0.0 : sigmas.back(); }
};

/// Eigenvalues (descending, unclamped) and matching unit eigenvectors, one per
/// column of `vectors`.
struct EigenSystem {
  Vector values;
  Matrix vectors;
};

/// Cyclic Jacobi on a symmetric matrix. Iterates until the off-diagonal
/// Frobenius norm is at most 1e-15 * |trace| (or the matrix is already diagonal).
inline EigenSystem jacobi_eigensystem(Matrix a) {
  const std::size_t k = a.rows();
  if (a.cols() != k) throw InputError("jacobi_eigenvalues: matrix must be square");
  Matrix v(k, k);
  for (std::size_t i = 0; i < k; ++i) v(i, i) = 1.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < k; ++i) scale += std::abs(a(i, i));
  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };
  for (int sweep = 0; sweep < 100; ++sweep) {
    const double off = off_norm();
    if (off == 0.0 || off <= 1e-15 * scale) break;
    for (std::size_t p = 0; p + 1 < k; ++p) {
      for (std::size_t q = p + 1; q < k; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t r = 0; r < k; ++r) {
          if (r == p || r == q) continue;
          const double arp = a(r, p);
          const double arq = a(r, q);
          a(r, p) = c * arp - s * arq;
          a(p, r) = a(r, p);
          a(r, q) = s * arp + c * arq;
          a(q, r) = a(r, q);
        }
        for (std::size_t r = 0; r < k; ++r) {
          const double vrp = v(r, p);
          const double vrq = v(r, q);
          v(r, p) = c * vrp - s * vrq;
          v(r, q) = s * vrp + c * vrq;
        }
      }
    }
  }
  std::vector<std::size_t> order(k);
  for (std::size_t i = 0; i < k; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });
  EigenSystem out{Vector(k), Matrix(k, k)};
  for (std::size_t j = 0; j < k; ++j) {
    out.values[j] = a(order[j], order[j]);
    for (std::size_t i = 0; i < k; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi, descending and unclamped.
inline Vector jacobi_eigenvalues(Matrix a) { return jacobi_eigensystem(std::move(a)).values; }

/// Eigenvalues of the 2x2 Gram matrix [[|a|^2, a.b], [a.b, |b|^2]] in closed
/// form, descending and unclamped.
inline std::pair<double, double> gram2_eigenvalues(double m00, double m01, double m11) {
  const double tr = m00 + m11;
  const double disc = std::hypot(m00 - m11, 2.0 * m01);  // sqrt(tr^2 - 4 det) without cancellation
  return {0.5 * (tr + disc), 0.5 * (tr - disc)};
}

/// Eigenvalues of a PSD Gram matrix, descending, with roundoff negatives
/// clamped to zero. Uses the closed form for k <= 2 and Jacobi otherwise.
/// Eigenvalues past `rank_bound` (known from the factor's shape, e.g. n < k)
/// are exactly zero and set so.
inline Vector gram_eigenvalues(const Matrix& m, std::size_t rank_bound = std::numeric_limits<std::size_t>::max()) {
  const std::size_t k = m.rows();
  Vector eig;
  if (k == 0) return eig;
  if (k == 1) {
    eig = {m(0, 0)};
  } else if (k == 2) {
    auto [l1, l2] = gram2_eigenvalues(m(0, 0), m(0, 1), m(1, 1));
    eig = {l1, l2};
  } else {
    eig = jacobi_eigenvalues(m);
  }
  for (std::size_t i = 0; i < eig.size(); ++i)
    if (eig[i] < 0.0 || i >= rank_bound) eig[i] = 0.0;
  return eig;
}

/// (prod eig)^(1/k) via the mean of logs; any eigenvalue <= 1e-300 makes it 0.
inline double geometric_mean(const Vector& eig) {
  if (eig.empty()) return 0.0;
  double logsum = 0.0;
  for (double l : eig) {
    if (l <= kZeroEigenvalue) return 0.0;
    logsum += std::log(l);
  }
  return std::exp(logsum / static_cast<double>(eig.size()));
}

inline SingularSpectrum spectrum_from_gram(const Matrix& m,
                                           std::size_t rank_bound = std::numeric_limits<std::size_t>::max()) {
  SingularSpectrum s;
  const Vector eig = gram_eigenvalues(m, rank_bound);
  s.trace = trace(m);
  s.det_gram = 1.0;
  for (double l : eig) {
    s.sigmas.push_back(std::sqrt(l));
    s.det_gram *= l;
  }
  return s;
}

/// Singular values of A (one per column) from the eigenvectors v_i of A^t A
/// as |A v_i|; unlike sqrt of the eigenvalues this keeps full absolute
/// accuracy for singular values near zero.
inline SingularSpectrum singular_values(const Matrix& a) {
  if (!a.all_finite()) throw InputError("singular_values: non-finite matrix entry");
  const Matrix m = gram(a);
  const std::size_t k = a.cols(), rank_bound = std::min(a.rows(), a.cols());
  const EigenSystem es = jacobi_eigensystem(m);
  SingularSpectrum s;
  s.trace = trace(m);
  s.sigmas.resize(k);
  for (std::size_t j = 0; j < k; ++j) s.sigmas[j] = j < rank_bound ? norm(a * es.vectors.column(j)) : 0.0;
  std::sort(s.sigmas.begin(), s.sigmas.end(), std::greater<>());
  s.det_gram = 1.0;
  for (double v : s.sigmas) s.det_gram *= v * v;
  return s;
}

/// Brute-force upper bound on sigma_min(A): min |A t| over `directions` seeded
/// uniform unit vectors t plus every signed basis vector, then polished by a
/// compass search on the unit sphere from the best of those. Only |A t| at
/// unit t is ever evaluated, so the result never drops below sigma_k.
inline double sigma_min_oracle(const Matrix& a, std::size_t directions, std::uint64_t seed) {
  if (directions < 100) throw PreconditionError("sigma_min_oracle: need at least 100 directions");
  const std::size_t k = a.cols();
  double best = std::numeric_limits<double>::infinity();
  Vector best_t(k, 0.0);
  auto consider = [&](const Vector& t) {
    const double v = norm(a * t);
    if (v < best) {
      best = v;
      best_t = t;
    }
  };
  Vector t(k, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    for (double sign : {1.0, -1.0}) {
      std::fill(t.begin(), t.end(), 0.0);
      t[j] = sign;
      consider(t);
    }
  }
  Rng rng(seed);
  for (std::size_t d = 0; d < directions; ++d) consider(rng.unit_vector(k));

  double step = 0.25;
  for (int round = 0; round < 5000 && step > 1e-12; ++round) {
    bool improved = false;
    for (std::size_t j = 0; j < k; ++j) {
      for (double sign : {1.0, -1.0}) {
        Vector c = best_t;
        c[j] += sign * step;
        const double cn = norm(c);
        for (double& x : c) x /= cn;
        const double before = best;
        consider(c);
        improved = improved || best < before;
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

/// rho_G(x) = k det(M)^(1/k) / tr(M); undefined where every gradient vanishes.
struct RhoValue {
  double rho = 0.0;
  bool defined = false;
};

inline RhoValue rho_from_gram(const Matrix& m, std::size_t rank_bound = std::numeric_limits<std::size_t>::max()) {
  const double tr = trace(m);
  if (!(tr > kZeroTrace)) return {0.0, false};
  const double k = static_cast<double>(m.rows());
  return {k * geometric_mean(gram_eigenvalues(m, rank_bound)) / tr, true};
}

/// rho from the gradient matrix itself: det(A^t A) = prod R_jj^2 for a
/// Householder QR of A, which stays accurate where the gradients are nearly
/// dependent (the Gram route loses half the digits there).
inline RhoValue rho(const GradientFrame& frame) {
  const double tr = trace(frame.m);
  if (!(tr > kZeroTrace)) return {0.0, false};
  const std::size_t n = frame.n(), k = frame.k();
  if (k > n) return {0.0, true};
  Matrix r = frame.a;
  double logdet = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    double s = 0.0;
    for (std::size_t i = j; i < n; ++i) s += r(i, j) * r(i, j);
    const double alpha = r(j, j) > 0.0 ? -std::sqrt(s) : std::sqrt(s);
    if (alpha * alpha <= kZeroEigenvalue) return {0.0, true};
    logdet += std::log(alpha * alpha);
    Vector v(n - j);
    for (std::size_t i = j; i < n; ++i) v[i - j] = r(i, j);
    v[0] -= alpha;
    const double vv = dot(v, v);
    if (vv == 0.0) continue;
    for (std::size_t c = j + 1; c < k; ++c) {
      double d = 0.0;
      for (std::size_t i = j; i < n; ++i) d += v[i - j] * r(i, c);
      const double f = 2.0 * d / vv;
      for (std::size_t i = j; i < n; ++i) r(i, c) -= f * v[i - j];
    }
  }
  return {static_cast<double>(k) * std::exp(logdet / static_cast<double>(k)) / tr, true};
}

/// rho_f for k = 2 through the angle between the two gradients:
/// 2 |grad g| |grad h| sin(eta) / (|grad g|^2 + |grad h|^2).
inline double rho_f_angle(const GradientFrame& frame) {
  if (frame.k() != 2) throw InputError("rho_f_angle: requires k = 2");
  const double gg = frame.m(0, 0);
  const double hh = frame.m(1, 1);
  const double tr = gg + hh;
  if (!(tr > kZeroTrace)) throw PreconditionError("rho_f_angle: derivative vanishes");
  const double ng = std::sqrt(gg);
  const double nh = std::sqrt(hh);
  if (ng == 0.0 || nh == 0.0) return 0.0;
  // |g x h|^2 = sum_{i<j} (g_i h_j - g_j h_i)^2 avoids the cancellation in 1 - cos^2.
  double wedge2 = 0.0;
  for (std::size_t i = 0; i < frame.n(); ++i)
    for (std::size_t j = i + 1; j < frame.n(); ++j) {
      const double w = frame.a(i, 0) * frame.a(j, 1) - frame.a(j, 0) * frame.a(i, 1);
      wedge2 += w * w;
    }
  const double sin_eta = std::clamp(std::sqrt(wedge2) / (ng * nh), 0.0, 1.0);
  return 2.0 * ng * nh * sin_eta / tr;
}

namespace detail {

inline bool leq_rel(double a, double b, double rel) {
  return a <= b + rel * std::max(std::abs(a), std::abs(b));
}

inline void check_finite(const Matrix& m, const char* op) {
  if (!m.all_finite()) throw InputError(std::string(op) + ": non-finite matrix entry");
}

}  // namespace detail

/// Both sides of sigma_k(BA) >= sigma_n(B) sigma_k(A), plus det(C^t C)^(1/k) for C = BA.
struct ProdSvCheck {
  double sigma_k_ba = 0.0;
  double sigma_n_b_sigma_k_a = 0.0;
  double det_root = 0.0;
  bool holds = false;
};

inline ProdSvCheck check_prodsv(const Matrix& a, const Matrix& b) {
  if (b.cols() != a.rows()) throw InputError("check_prodsv: B must be m x n for n x k A");
  detail::check_finite(a, "check_prodsv");
  detail::check_finite(b, "check_prodsv");
  const Matrix c = b * a;
  const Vector eig_c = gram_eigenvalues(gram(c), std::min({b.rows(), a.rows(), a.cols()}));
  ProdSvCheck r;
  r.sigma_k_ba = std::sqrt(eig_c.back());
  r.sigma_n_b_sigma_k_a = singular_values(b).sigma_min() * singular_values(a).sigma_min();
  r.det_root = geometric_mean(eig_c);
  const double sk2 = r.sigma_k_ba * r.sigma_k_ba;
  const double rhs2 = r.sigma_n_b_sigma_k_a * r.sigma_n_b_sigma_k_a;
  r.holds = detail::leq_rel(r.sigma_n_b_sigma_k_a, r.sigma_k_ba, 1e-9) && detail::leq_rel(sk2, r.det_root, 1e-9) &&
            detail::leq_rel(rhs2, sk2, 1e-9);
  return r;
}

/// n sigma_n(A^t)^2 sigma_n(B)^2 <= tr(A^t B^t B A) <= n sigma_1(A)^2 sigma_1(B)^2.
struct TraceSandwich {
  double lower = 0.0;
  double trace = 0.0;
  double upper = 0.0;
  bool holds = false;
};

inline TraceSandwich check_trace_sandwich(const Matrix& a, const Matrix& b) {
  if (b.cols() != a.rows()) throw InputError("check_trace_sandwich: B must be m x n for n x k A");
  detail::check_finite(a, "check_trace_sandwich");
  detail::check_finite(b, "check_trace_sandwich");
  const double n = static_cast<double>(a.rows());
  const SingularSpectrum sa = singular_values(a);
  const SingularSpectrum sat = singular_values(transpose(a));  // n values; trailing ones vanish when k < n
  const SingularSpectrum sb = singular_values(b);
  TraceSandwich r;
  r.lower = n * sat.sigma_min() * sat.sigma_min() * sb.sigma_min() * sb.sigma_min();
  r.trace = trace(gram(b * a));
  r.upper = n * sa.sigma_max() * sa.sigma_max() * sb.sigma_max() * sb.sigma_max();
  r.holds = detail::leq_rel(r.lower, r.trace, 1e-9) && detail::leq_rel(r.trace, r.upper, 1e-9);
  return r;
}

/// k det(C^t C)^(1/k) / tr(C^t C) >= k sigma_n(B)^2 sigma_k(A)^2 / (n sigma_1(B)^2 sigma_1(A)^2), C = BA.
struct SlwCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// The right-hand side alone, for callers that already hold the spectra.
inline double slw_lower_bound(const SingularSpectrum& sa, const SingularSpectrum& sb, std::size_t n) {
  const double num = static_cast<double>(sa.sigmas.size()) * sb.sigma_min() * sb.sigma_min() * sa.sigma_min() *
                     sa.sigma_min();
  const double den = static_cast<double>(n) * sb.sigma_max() * sb.sigma_max() * sa.sigma_max() * sa.sigma_max();
  return den > 0.0 ? num / den : 0.0;
}

inline SlwCheck check_slw_bound(const Matrix& a, const Matrix& b) {
  if (b.cols() != a.rows()) throw InputError("check_slw_bound: B must be m x n for n x k A");
  detail::check_finite(a, "check_slw_bound");
  detail::check_finite(b, "check_slw_bound");
  const Matrix mc = gram(b * a);
  if (!(trace(mc) > kZeroTrace)) throw PreconditionError("check_slw_bound: BA = 0");
  SlwCheck r;
  r.lhs = rho_from_gram(mc, std::min({b.rows(), a.rows(), a.cols()})).rho;
  r.rhs = slw_lower_bound(singular_values(a), singular_values(b), a.rows());
  r.holds = detail::leq_rel(r.rhs, r.lhs, 1e-9);
  return r;
}

/// Arithmetic/geometric mean comparison for the eigenvalues of a PSD matrix:
/// k det(M)^(1/k) <= tr M, with equality exactly when the eigenvalues agree.
/// "Equal" means within 1e-8 relative to the trace on both sides.
struct GeomMeanCheck {
  double geometric = 0.0;  ///< k det(M)^(1/k)
  double trace = 0.0;
  bool holds = false;
  bool means_equal = false;
  bool eigenvalues_equal = false;

  bool equality_consistent() const { return means_equal == eigenvalues_equal; }
};

inline GeomMeanCheck check_geom_mean(const Matrix& m) {
  const std::size_t k = m.rows();
  if (m.cols() != k) throw InputError("check_geom_mean: matrix must be square");
  detail::check_finite(m, "check_geom_mean");
  double maxabs = 0.0;
  for (double v : m.data()) maxabs = std::max(maxabs, std::abs(v));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if (std::abs(m(i, j) - m(j, i)) > 1e-12 * std::max(1.0, maxabs))
        throw InputError("check_geom_mean: matrix is not symmetric");
  const Vector eig = gram_eigenvalues(m);
  GeomMeanCheck r;
  r.trace = trace(m);
  r.geometric = static_cast<double>(k) * geometric_mean(eig);
  r.holds = detail::leq_rel(r.geometric, r.trace, 1e-12);
  const double tol = 1e-8 * std::abs(r.trace);
  r.means_equal = std::abs(r.trace - r.geometric) <= tol;
  r.eigenvalues_equal = eig.empty() || (eig.front() - eig.back()) <= tol;
  return r;
}

}  // namespace milnorkit
