#pragma once

// Finite-resolution detectors for Milnor's conditions (a), (b), (c) and for
// Milnor pairs. Dependence sets are recognized by normalized minimal singular
// values falling below tol_dep; closures and accumulation are replaced by
// explicit (tol_dep, tol_f, r_min) windows. A "holds" verdict means no witness
// was found on the samples, nothing more.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "milnorkit/analytic_map.hpp"
#include "milnorkit/error.hpp"
#include "milnorkit/loja.hpp"
#include "milnorkit/random.hpp"
#include "milnorkit/region.hpp"
#include "milnorkit/spectra.hpp"

namespace milnorkit {

inline constexpr std::size_t kMaxWitnesses = 32;

/// Normalized rank measures at x for the gradients of G, and for the gradients
/// augmented with grad r = 2x (r = |x|^2).
struct DependenceProbe {
  Point x;
  double sigma_k_norm = 0.0;    ///< sigma_k(A) / sigma_1(A), 0 if sigma_1 = 0
  double sigma_aug_norm = 0.0;  ///< sigma_{k+1}([2x | A]) / sigma_1([2x | A]), 0 if sigma_1 = 0
  double f_norm = 0.0;          ///< |G(x)|
  double radius = 0.0;          ///< |x|
};

inline double normalized_sigma_min(const Matrix& a) {
  const SingularSpectrum s = singular_values(a);
  return s.sigma_max() > 0.0 ? s.sigma_min() / s.sigma_max() : 0.0;
}

inline DependenceProbe probe(const AnalyticMap& map, const Point& x) {
  const GradientFrame f = map.gradient_frame(x);
  DependenceProbe p;
  p.x = x;
  p.sigma_k_norm = normalized_sigma_min(f.a);
  Matrix aug(map.n(), map.k() + 1);
  for (std::size_t i = 0; i < map.n(); ++i) {
    aug(i, 0) = 2.0 * x[i];
    for (std::size_t j = 0; j < map.k(); ++j) aug(i, j + 1) = f.a(i, j);
  }
  p.sigma_aug_norm = normalized_sigma_min(aug);
  p.f_norm = norm(map.eval(x));
  p.radius = x.norm();
  return p;
}

enum class Condition { a, b, c, pair };

inline const char* to_string(Condition c) {
  switch (c) {
    case Condition::a: return "a";
    case Condition::b: return "b";
    case Condition::c: return "c";
    case Condition::pair: return "pair";
  }
  return "?";
}

struct ScanTolerances {
  double tol_dep = 1e-8;
  double tol_f = 1e-8;
  double r_min = 0.0;
};

struct ConditionReport {
  Condition condition = Condition::a;
  bool holds = true;
  std::vector<DependenceProbe> witnesses;  ///< first kMaxWitnesses in sample order
  std::size_t witness_count = 0;
  ScanTolerances tolerances;
  std::size_t samples_scanned = 0;

  void add_witness(DependenceProbe p) {
    ++witness_count;
    holds = false;
    if (witnesses.size() < kMaxWitnesses) witnesses.push_back(std::move(p));
  }
};

/// Condition (a): no sample is critical-like (sigma_k_norm < tol_dep) while
/// lying off X (|G| > tol_f).
inline ConditionReport milnor_a_scan(const AnalyticMap& map, const RegionSpec& region, double tol_dep = 1e-8,
                                     double tol_f = 1e-8) {
  ConditionReport r;
  r.condition = Condition::a;
  r.tolerances = {tol_dep, tol_f, 0.0};
  for (const Point& x : sample_region(region)) {
    ++r.samples_scanned;
    DependenceProbe p = probe(map, x);
    if (p.sigma_k_norm < tol_dep && p.f_norm > tol_f) r.add_witness(std::move(p));
  }
  return r;
}

/// Condition (b): no sample of B - X (sigma_aug_norm < tol_dep, 0 < |G|)
/// lies within tol_f of X at a radius above r_min (default: radius / 100).
inline ConditionReport milnor_b_scan(const AnalyticMap& map, const RegionSpec& region, double tol_dep = 1e-8,
                                     double tol_f = 1e-8, std::optional<double> r_min = std::nullopt) {
  ConditionReport r;
  r.condition = Condition::b;
  r.tolerances = {tol_dep, tol_f, r_min.value_or(region.radius / 100.0)};
  for (const Point& x : sample_region(region)) {
    ++r.samples_scanned;
    DependenceProbe p = probe(map, x);
    if (p.sigma_aug_norm < tol_dep && p.f_norm > kZeroTrace && p.f_norm <= tol_f && p.radius > r.tolerances.r_min)
      r.add_witness(std::move(p));
  }
  return r;
}

struct RadiusTrial {
  double epsilon = 0.0;
  ConditionReport a;
  ConditionReport b;
  bool passes() const { return a.holds && b.holds; }
};

struct RadiusEstimate {
  std::optional<double> epsilon;  ///< largest passing radius, if any
  std::vector<RadiusTrial> trials;
};

/// Scans balls at the origin of each radius with a shared seed and returns the
/// largest radius for which both (a) and (b) hold on samples.
inline RadiusEstimate milnor_radius_estimate(const AnalyticMap& map, const std::vector<double>& epsilons,
                                             std::size_t levels = 32, std::size_t directions = 64,
                                             std::uint64_t seed = 42, double tol_dep = 1e-8, double tol_f = 1e-8) {
  RadiusEstimate out;
  for (double eps : epsilons) {
    const RegionSpec region = RegionSpec::ball(Point::origin(map.n()), eps, levels, directions, seed);
    RadiusTrial t{eps, milnor_a_scan(map, region, tol_dep, tol_f), milnor_b_scan(map, region, tol_dep, tol_f)};
    if (t.passes() && (!out.epsilon || eps > *out.epsilon)) out.epsilon = eps;
    out.trials.push_back(std::move(t));
  }
  return out;
}

namespace detail {

struct Projection {
  Point x;
  bool converged = false;
};

inline double tube_residual(const AnalyticMap& map, const Point& x, double delta) {
  const Vector g = map.eval(x);
  return (dot(g, g) - delta * delta) / (delta * delta);
}

/// Damped Newton for the scalar equation |G(x)|^2 = delta^2 (minimum-norm
/// step along grad |G|^2). Halves the step while the residual grows.
inline Projection project_to_tube(const AnalyticMap& map, Point x, double delta, int max_iter = 25) {
  double res = tube_residual(map, x, delta);
  for (int it = 0; it < max_iter; ++it) {
    if (std::abs(res) <= 1e-12) return {x, true};
    const GradientFrame f = map.gradient_frame(x);
    const Vector g = map.eval(x);
    const Vector grad = 2.0 * f.a * std::span<const double>(g);  // grad |G|^2 = 2 A G
    const double gg = dot(grad, grad);
    if (!(gg > 0.0) || !std::isfinite(gg)) return {x, false};
    const double phi = dot(g, g) - delta * delta;
    double step = 1.0;
    bool moved = false;
    for (int halving = 0; halving < 30; ++halving, step *= 0.5) {
      Vector y = x.vector();
      for (std::size_t i = 0; i < y.size(); ++i) y[i] -= step * phi * grad[i] / gg;
      bool finite = true;
      for (double v : y) finite = finite && std::isfinite(v);
      if (!finite) continue;
      Point cand(std::move(y));
      const double r2 = tube_residual(map, cand, delta);
      if (std::abs(r2) < std::abs(res)) {
        x = std::move(cand);
        res = r2;
        moved = true;
        break;
      }
    }
    if (!moved) return {x, false};
  }
  return {x, std::abs(res) <= 1e-12};
}

/// Damped Gauss-Newton for |G(x)| = delta and |x| = epsilon simultaneously.
inline Projection project_to_corner(const AnalyticMap& map, Point x, double delta, double epsilon, int max_iter = 25) {
  auto residual = [&](const Point& p) {
    const Vector g = map.eval(p);
    const double r1 = (dot(g, g) - delta * delta) / (delta * delta);
    const double r2 = (dot(p.coords(), p.coords()) - epsilon * epsilon) / (epsilon * epsilon);
    return std::pair{r1, r2};
  };
  auto [r1, r2] = residual(x);
  for (int it = 0; it < max_iter; ++it) {
    if (std::abs(r1) <= 1e-12 && std::abs(r2) <= 1e-12) return {x, true};
    const GradientFrame f = map.gradient_frame(x);
    const Vector g = map.eval(x);
    Vector j1 = 2.0 * f.a * std::span<const double>(g);
    Vector j2(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      j1[i] /= delta * delta;
      j2[i] = 2.0 * x[i] / (epsilon * epsilon);
    }
    // s = -J^t (J J^t)^{-1} F
    const double a11 = dot(j1, j1), a12 = dot(j1, j2), a22 = dot(j2, j2);
    const double det = a11 * a22 - a12 * a12;
    if (!(det > 1e-14 * a11 * a22) || !std::isfinite(det)) return {x, false};
    const double w1 = (a22 * r1 - a12 * r2) / det;
    const double w2 = (a11 * r2 - a12 * r1) / det;
    const double before = std::hypot(r1, r2);
    double step = 1.0;
    bool moved = false;
    for (int halving = 0; halving < 30; ++halving, step *= 0.5) {
      Vector y = x.vector();
      for (std::size_t i = 0; i < y.size(); ++i) y[i] -= step * (w1 * j1[i] + w2 * j2[i]);
      bool finite = true;
      for (double v : y) finite = finite && std::isfinite(v);
      if (!finite) continue;
      Point cand(std::move(y));
      auto [c1, c2] = residual(cand);
      if (std::hypot(c1, c2) < before) {
        x = std::move(cand);
        r1 = c1;
        r2 = c2;
        moved = true;
        break;
      }
    }
    if (!moved) return {x, false};
  }
  return {x, std::abs(r1) <= 1e-12 && std::abs(r2) <= 1e-12};
}

inline Point uniform_in_ball(Rng& rng, std::size_t n, double radius) {
  Vector u = rng.unit_vector(n);
  const double r = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(n));
  for (double& c : u) c *= r;
  return Point(std::move(u));
}

/// Walks x along the tube toward smaller sigma_k_norm: Gauss-Newton on the
/// scalar residual sigma_k_norm with a central-difference gradient projected
/// onto the tube's tangent space, re-projecting after every step.
inline Point refine_on_tube(const AnalyticMap& map, Point x, double delta, double epsilon, double target) {
  double r = probe(map, x).sigma_k_norm;
  for (int it = 0; it < 30 && r > target; ++it) {
    const std::size_t n = x.size();
    const double h = 1e-7 * std::max(x.norm(), 1e-12);
    Vector grad(n);
    for (std::size_t i = 0; i < n; ++i) {
      Vector xp = x.vector(), xm = x.vector();
      xp[i] += h;
      xm[i] -= h;
      grad[i] = (probe(map, Point(xp)).sigma_k_norm - probe(map, Point(xm)).sigma_k_norm) / (2.0 * h);
    }
    const GradientFrame f = map.gradient_frame(x);
    const Vector g = map.eval(x);
    const Vector normal = f.a * std::span<const double>(g);
    const double nn = dot(normal, normal);
    if (nn > 0.0) {
      const double c = dot(grad, normal) / nn;
      for (std::size_t i = 0; i < n; ++i) grad[i] -= c * normal[i];
    }
    const double gg = dot(grad, grad);
    if (!(gg > 1e-20) || !std::isfinite(gg)) break;
    Vector step(n);
    double len = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      step[i] = -r * grad[i] / gg;
      len += step[i] * step[i];
    }
    len = std::sqrt(len);
    const double max_len = 0.1 * std::max(x.norm(), 1e-12);
    double scale = len > max_len ? max_len / len : 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 12; ++halving, scale *= 0.5) {
      Vector y = x.vector();
      for (std::size_t i = 0; i < n; ++i) y[i] += scale * step[i];
      Projection pr = project_to_tube(map, Point(std::move(y)), delta);
      if (!pr.converged || pr.x.norm() > epsilon) continue;
      const double rn = probe(map, pr.x).sigma_k_norm;
      if (rn < r * (1.0 - 1e-6)) {
        x = std::move(pr.x);
        r = rn;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  return x;
}

}  // namespace detail

struct MilnorPairEstimate {
  double epsilon = 0.0;
  double delta = 0.0;
  double transversality_margin = std::numeric_limits<double>::infinity();
  bool holds = false;
  double tol_dep = 1e-8;
  std::size_t draws = 0;
  std::size_t failed_projections = 0;
  std::size_t interior_checked = 0;
  std::size_t boundary_checked = 0;
  std::size_t corner_draws = 0;
  std::size_t corner_converged = 0;
  std::vector<DependenceProbe> witnesses;
  std::vector<DependenceProbe> tube_points;  ///< every checked point, in draw order
};

/// Samples the tube {|G| = delta} inside the closed ball of radius epsilon and
/// checks that G is a submersion at interior tube points and that (G, |x|^2)
/// is a submersion on the boundary band |x| in [epsilon (1 - 1e-3), epsilon].
///
/// `tube_samples` seeded draws in the ball are projected onto the tube; a
/// further tube_samples / 4 draws on the sphere are projected onto the corner
/// {|G| = delta, |x| = epsilon} so the boundary band is actually visited. The
/// eight interior points with the smallest sigma_k_norm are then refined along
/// the tube toward the dependence locus.
inline MilnorPairEstimate milnor_pair_scan(const AnalyticMap& map, double epsilon, double delta,
                                           std::size_t tube_samples = 1000, std::uint64_t seed = 42,
                                           double tol_dep = 1e-8) {
  if (!(delta > 0.0) || !(epsilon > 0.0)) throw PreconditionError("milnor_pair_scan: epsilon and delta must be positive");
  if (tube_samples < 1000) throw PreconditionError("milnor_pair_scan: need at least 1000 tube samples");
  MilnorPairEstimate e;
  e.epsilon = epsilon;
  e.delta = delta;
  e.tol_dep = tol_dep;
  const std::size_t n = map.n();
  Rng rng(seed);

  std::vector<Point> points;
  for (std::size_t i = 0; i < tube_samples; ++i) {
    ++e.draws;
    detail::Projection pr = detail::project_to_tube(map, detail::uniform_in_ball(rng, n, epsilon), delta);
    if (!pr.converged || pr.x.norm() > epsilon) {
      ++e.failed_projections;
      continue;
    }
    points.push_back(std::move(pr.x));
  }
  if (2 * e.failed_projections > e.draws)
    throw InsufficientDataError("milnor_pair_scan", std::to_string(e.failed_projections) + " of " +
                                                        std::to_string(e.draws) +
                                                        " Newton projections onto the tube failed");
  for (std::size_t i = 0; i < tube_samples / 4; ++i) {
    ++e.corner_draws;
    Vector u = rng.unit_vector(n);
    for (double& c : u) c *= epsilon;
    detail::Projection pr = detail::project_to_corner(map, Point(std::move(u)), delta, epsilon);
    if (pr.converged && pr.x.norm() <= epsilon * (1.0 + 1e-9)) {
      ++e.corner_converged;
      points.push_back(std::move(pr.x));
    }
  }

  const double interior_limit = epsilon * (1.0 - 1e-6);
  const double band_lo = epsilon * (1.0 - 1e-3);
  std::vector<DependenceProbe> probes;
  for (const Point& x : points) probes.push_back(probe(map, x));

  // Refine the most nearly critical interior points.
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < probes.size(); ++i)
    if (probes[i].radius < interior_limit) order.push_back(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return probes[a].sigma_k_norm < probes[b].sigma_k_norm; });
  if (order.size() > 8) order.resize(8);
  for (std::size_t idx : order) {
    Point refined = detail::refine_on_tube(map, probes[idx].x, delta, epsilon, tol_dep * 1e-3);
    if (!(refined == probes[idx].x)) probes.push_back(probe(map, refined));
  }

  for (const DependenceProbe& p : probes) {
    bool bad = false;
    if (p.radius < interior_limit) {
      ++e.interior_checked;
      e.transversality_margin = std::min(e.transversality_margin, p.sigma_k_norm);
      bad = bad || !(p.sigma_k_norm > tol_dep);
    }
    if (p.radius >= band_lo && p.radius <= epsilon * (1.0 + 1e-9)) {
      ++e.boundary_checked;
      e.transversality_margin = std::min(e.transversality_margin, p.sigma_aug_norm);
      bad = bad || !(p.sigma_aug_norm > tol_dep);
    }
    if (bad && e.witnesses.size() < kMaxWitnesses) e.witnesses.push_back(p);
  }
  e.tube_points = std::move(probes);
  e.holds = e.transversality_margin > tol_dep;
  return e;
}

/// omega = -h grad g + g grad h for f = (g, h).
inline Vector omega_field(const AnalyticMap& f, const Point& x) {
  if (f.k() != 2) throw InputError("omega_field: requires k = 2");
  const Vector v = f.eval(x);
  const GradientFrame fr = f.gradient_frame(x);
  Vector w(f.n());
  for (std::size_t i = 0; i < f.n(); ++i) w[i] = -v[1] * fr.a(i, 0) + v[0] * fr.a(i, 1);
  return w;
}

namespace detail {

struct CTerms {
  Vector grad_f2;  ///< grad |f|^2 = 2 g grad g + 2 h grad h
  Vector omega;
  double f_norm = 0.0;
  double span_residual = 0.0;  ///< |x - proj_span(grad g, grad h) x| / |x|
};

inline CTerms c_terms(const AnalyticMap& f, const Point& x) {
  const Vector v = f.eval(x);
  const GradientFrame fr = f.gradient_frame(x);
  const std::size_t n = f.n();
  CTerms t;
  t.f_norm = norm(v);
  t.grad_f2.resize(n);
  t.omega.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    t.grad_f2[i] = 2.0 * v[0] * fr.a(i, 0) + 2.0 * v[1] * fr.a(i, 1);
    t.omega[i] = -v[1] * fr.a(i, 0) + v[0] * fr.a(i, 1);
  }
  // Least-squares residual of x against span(grad g, grad h) by Gram-Schmidt.
  const double xn = x.norm();
  if (xn == 0.0) return t;
  Vector res = x.vector();
  std::vector<Vector> basis;
  for (std::size_t j = 0; j < 2; ++j) {
    Vector q = fr.a.column(j);
    const double q0 = norm(q);
    for (const Vector& b : basis) {
      const double c = dot(b, q);
      for (std::size_t i = 0; i < n; ++i) q[i] -= c * b[i];
    }
    const double qn = norm(q);
    if (!(qn > 1e-12 * q0) || !(qn > 0.0)) continue;
    for (double& c : q) c /= qn;
    basis.push_back(std::move(q));
  }
  for (const Vector& b : basis) {
    const double c = dot(b, res);
    for (std::size_t i = 0; i < n; ++i) res[i] -= c * b[i];
  }
  t.span_residual = norm(res) / xn;
  return t;
}

}  // namespace detail

/// Condition (c) on samples off X where x lies (within span_tol) in
/// span(grad g, grad h): |omega|^2 (x . grad|f|^2) > (grad|f|^2 . omega)(x . omega).
struct ConditionCReport {
  ConditionReport report;
  double span_tol = 1e-6;
  std::size_t off_x = 0;
  std::size_t in_band = 0;
  double min_lhs = std::numeric_limits<double>::infinity();
  double max_abs_rhs = 0.0;
};

inline ConditionCReport condition_c_scan(const AnalyticMap& f, const RegionSpec& region, double span_tol = 1e-6) {
  if (f.k() != 2) throw InputError("condition_c_scan: requires k = 2");
  ConditionCReport c;
  c.span_tol = span_tol;
  c.report.condition = Condition::c;
  for (const Point& x : sample_region(region)) {
    ++c.report.samples_scanned;
    const detail::CTerms t = detail::c_terms(f, x);
    if (!(t.f_norm > kZeroTrace)) continue;
    ++c.off_x;
    if (!(t.span_residual < span_tol)) continue;
    ++c.in_band;
    const double lhs = dot(t.omega, t.omega) * dot(x.coords(), t.grad_f2);
    const double rhs = dot(t.grad_f2, t.omega) * dot(x.coords(), t.omega);
    c.min_lhs = std::min(c.min_lhs, lhs);
    c.max_abs_rhs = std::max(c.max_abs_rhs, std::abs(rhs));
    if (lhs - rhs <= 1e-12 * (std::abs(lhs) + std::abs(rhs))) c.report.add_witness(probe(f, x));
  }
  return c;
}

/// For a simple f: x . grad|f|^2 > 0 and grad|f|^2 . omega = 0 off X.
struct SimpleCFacts {
  bool applicable = false;
  bool holds = false;
  std::size_t samples = 0;
  std::size_t violations = 0;
  double min_x_dot_grad = std::numeric_limits<double>::infinity();
  double max_grad_dot_omega = 0.0;  ///< max |grad|f|^2 . omega| / (1 + |grad|f|^2| |omega|)
  double simple_deviation = 0.0;
};

inline SimpleCFacts simple_c_facts(const AnalyticMap& f, const RegionSpec& region) {
  if (f.k() != 2) throw InputError("simple_c_facts: requires k = 2");
  SimpleCFacts s;
  s.simple_deviation = rho_inf_estimate(f, region).simple_deviation;
  if (!(s.simple_deviation <= 1e-9)) return s;
  s.applicable = true;
  for (const Point& x : sample_region(region)) {
    const detail::CTerms t = detail::c_terms(f, x);
    if (!(t.f_norm > kZeroTrace)) continue;
    ++s.samples;
    const double xg = dot(x.coords(), t.grad_f2);
    const double go = std::abs(dot(t.grad_f2, t.omega)) / (1.0 + norm(t.grad_f2) * norm(t.omega));
    s.min_x_dot_grad = std::min(s.min_x_dot_grad, xg);
    s.max_grad_dot_omega = std::max(s.max_grad_dot_omega, go);
    if (!(xg > 0.0) || !(go <= 1e-9)) ++s.violations;
  }
  s.holds = s.violations == 0;
  return s;
}

}  // namespace milnorkit
