#pragma once

// Sampled estimators for the Ł-weight, strong/weak Łojasiewicz exponent fits,
// and the Jacquemard-type gradient conditions for pairs f = (g, h).
//
// Every estimator here is a detector over a finite sample set (see RegionSpec),
// not a certificate: infima become sampled minima and the report names the
// witness so a caller can refine locally.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "milnorkit/analytic_map.hpp"
#include "milnorkit/error.hpp"
#include "milnorkit/region.hpp"
#include "milnorkit/spectra.hpp"

namespace milnorkit {

/// Positivity threshold for verdicts ("bounded away from zero" on samples).
inline constexpr double kPositive = 1e-6;

/// ||M - (tr M / k) I||_F / tr M; zero exactly for a simple frame.
inline double simple_deviation(const Matrix& m) {
  const double tr = trace(m);
  if (!(tr > kZeroTrace)) return 0.0;
  const double mean = tr / static_cast<double>(m.rows());
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const double d = m(i, j) - (i == j ? mean : 0.0);
      s += d * d;
    }
  return std::sqrt(s) / tr;
}

struct WeightReport {
  double rho_inf_hat = 1.0;
  Point min_witness;
  std::size_t samples = 0;
  std::size_t excluded_count = 0;
  double simple_deviation = 0.0;
};

/// Sampled Ł-weight: the minimum of rho_G over samples where d_x G != 0.
inline WeightReport rho_inf_estimate(const AnalyticMap& map, const RegionSpec& region) {
  WeightReport r;
  bool any = false;
  for (const Point& x : sample_region(region)) {
    ++r.samples;
    const GradientFrame f = map.gradient_frame(x);
    const RhoValue v = rho(f);
    if (!v.defined) {
      ++r.excluded_count;
      continue;
    }
    if (!any || v.rho < r.rho_inf_hat) {
      r.rho_inf_hat = v.rho;
      r.min_witness = x;
    }
    any = true;
    r.simple_deviation = std::max(r.simple_deviation, simple_deviation(f.m));
  }
  if (!any) throw DegenerateMapError("rho_inf_estimate: the derivative vanishes at every sample");
  return r;
}

enum class LojaVariant { strong, weak };
enum class CMode { fixed_one, two_param };

inline const char* to_string(LojaVariant v) { return v == LojaVariant::strong ? "strong" : "weak"; }
inline const char* to_string(CMode c) { return c == CMode::fixed_one ? "fixed_one" : "two_param"; }

/// Fitted |G(x) - G(p)|^theta <= c * s(x), where s is sigma_k (strong) or
/// sqrt(tr M) (weak).
struct LojaEstimate {
  double theta_hat = 0.0;
  double c_hat = 1.0;
  std::size_t samples_used = 0;
  double max_residual = 0.0;  ///< max over retained samples of |G(x)-G(p)|^theta - c s(x)
  bool valid = false;         ///< theta_hat < 1
  LojaVariant variant = LojaVariant::strong;
  CMode c_mode = CMode::fixed_one;
};

/// Log-envelope fit of the (strong or weak) Łojasiewicz inequality at p.
///
/// Retains samples with 0 < |G(x)-G(p)| < 1 and s(x) > 0. With
/// u = -log|G(x)-G(p)| and v = -log s(x) the inequality reads theta*u + L >= v
/// for L = log c. `fixed_one` pins L = 0; `two_param` minimizes theta over
/// |L| <= 50 and, among minimizers, takes the smallest L.
inline LojaEstimate loja_fit(const AnalyticMap& map, const Point& p, const RegionSpec& region,
                             LojaVariant variant = LojaVariant::strong, CMode c_mode = CMode::fixed_one) {
  if (p.size() != map.n()) throw InputError("loja_fit: base point dimension mismatch");
  if (!(region.center == p)) throw PreconditionError("loja_fit: region must be centered at p");
  const Vector gp = map.eval(p);

  struct Sample {
    double u, v, d, s;
  };
  std::vector<Sample> kept;
  for (const Point& x : sample_region(region)) {
    const Vector gx = map.eval(x);
    double d2 = 0.0;
    for (std::size_t i = 0; i < gx.size(); ++i) d2 += (gx[i] - gp[i]) * (gx[i] - gp[i]);
    const double d = std::sqrt(d2);
    if (!(d > 0.0 && d < 1.0)) continue;
    const GradientFrame f = map.gradient_frame(x);
    const double s = variant == LojaVariant::strong ? singular_values(f.a).sigma_min() : std::sqrt(trace(f.m));
    if (!(s > 0.0) || !std::isfinite(s)) continue;
    kept.push_back({-std::log(d), -std::log(s), d, s});
  }
  if (kept.size() < 10)
    throw InsufficientDataError("loja_fit", "only " + std::to_string(kept.size()) +
                                                " samples with 0 < |G(x)-G(p)| < 1 and nonzero gradient measure");

  LojaEstimate e;
  e.variant = variant;
  e.c_mode = c_mode;
  e.samples_used = kept.size();
  double log_c = 0.0;
  if (c_mode == CMode::fixed_one) {
    double theta = 0.0;
    for (const Sample& s : kept) theta = std::max(theta, s.v / s.u);
    e.theta_hat = theta;
  } else {
    // For fixed L the least feasible theta is max_i (v_i - L)/u_i, which
    // decreases in L; so the LP optimum sits on L = 50 unless theta clamps at 0,
    // in which case the smallest feasible L is taken.
    constexpr double kLogCBound = 50.0;
    double theta = 0.0;
    for (const Sample& s : kept) theta = std::max(theta, (s.v - kLogCBound) / s.u);
    double l = -kLogCBound;
    for (const Sample& s : kept) l = std::max(l, s.v - theta * s.u);
    e.theta_hat = theta;
    log_c = std::min(l, kLogCBound);
  }
  e.c_hat = std::exp(log_c);
  e.max_residual = -std::numeric_limits<double>::infinity();
  for (const Sample& s : kept) e.max_residual = std::max(e.max_residual, std::pow(s.d, e.theta_hat) - e.c_hat * s.s);
  e.valid = e.theta_hat < 1.0;
  return e;
}

/// Sampled infima of the three quantities whose positivity is equivalent:
/// rho_G, sigma_k / sqrt(tr M), and sigma_k / sigma_1.
struct EquivalenceReport {
  double inf_rho = 1.0;
  double inf_sigma_k_over_root_trace = 1.0;
  double inf_sigma_k_over_sigma_1 = 1.0;
  std::size_t samples = 0;
  bool consistent = true;
};

inline EquivalenceReport equivalence_report(const AnalyticMap& map, const RegionSpec& region) {
  EquivalenceReport r;
  for (const Point& x : sample_region(region)) {
    const GradientFrame f = map.gradient_frame(x);
    const SingularSpectrum s = spectrum_from_gram(f.m, f.n());
    if (!(s.trace > kZeroTrace)) continue;
    ++r.samples;
    r.inf_rho = std::min(r.inf_rho, rho(f).rho);
    r.inf_sigma_k_over_root_trace = std::min(r.inf_sigma_k_over_root_trace, s.sigma_min() / std::sqrt(s.trace));
    r.inf_sigma_k_over_sigma_1 = std::min(r.inf_sigma_k_over_sigma_1, s.sigma_min() / s.sigma_max());
  }
  const double vals[] = {r.inf_rho, r.inf_sigma_k_over_root_trace, r.inf_sigma_k_over_sigma_1};
  const bool any_positive = std::any_of(std::begin(vals), std::end(vals), [](double v) { return v > kPositive; });
  const bool all_nonzero = std::all_of(std::begin(vals), std::end(vals), [](double v) { return v > 1e-12; });
  r.consistent = !any_positive || all_nonzero;
  return r;
}

/// Condition J1: |cos| of the angle between grad g and grad h stays <= 1 - tau.
struct J1Report {
  double max_abs_cos = 0.0;
  double tau_hat = 1.0;
  bool holds = false;
  std::size_t samples = 0;
  Point witness;  ///< where max |cos| was attained
};

inline J1Report jacquemard_j1(const AnalyticMap& map, const RegionSpec& region) {
  if (map.k() != 2) throw InputError("jacquemard_j1: requires k = 2");
  J1Report r;
  for (const Point& x : sample_region(region)) {
    const GradientFrame f = map.gradient_frame(x);
    const double gg = f.m(0, 0), hh = f.m(1, 1);
    if (!(gg > kZeroTrace && hh > kZeroTrace)) continue;
    const double c = std::min(1.0, std::abs(f.m(0, 1)) / (std::sqrt(gg) * std::sqrt(hh)));
    if (r.samples == 0 || c > r.max_abs_cos) {
      r.max_abs_cos = c;
      r.witness = x;
    }
    ++r.samples;
  }
  if (r.samples == 0) throw InsufficientDataError("jacquemard_j1", "no sample has both gradients nonzero");
  r.tau_hat = 1.0 - r.max_abs_cos;
  r.holds = r.tau_hat > kPositive;
  return r;
}

/// Sampled bounds A <= |grad h| / |grad g| <= B; infinity when grad g vanishes
/// alone, zero when grad h does.
struct ComparabilityReport {
  double a_hat = 0.0;
  double b_hat = std::numeric_limits<double>::infinity();
  bool comparable = false;
  std::size_t samples = 0;
};

inline ComparabilityReport comparability(const AnalyticMap& map, const RegionSpec& region) {
  if (map.k() != 2) throw InputError("comparability: requires k = 2");
  ComparabilityReport r;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const Point& x : sample_region(region)) {
    const GradientFrame f = map.gradient_frame(x);
    if (!(trace(f.m) > kZeroTrace)) continue;
    const double ng = std::sqrt(f.m(0, 0)), nh = std::sqrt(f.m(1, 1));
    const double ratio = ng > 0.0 ? nh / ng : std::numeric_limits<double>::infinity();
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    ++r.samples;
  }
  if (r.samples == 0) return r;
  r.a_hat = lo;
  r.b_hat = hi;
  r.comparable = r.a_hat > kPositive && r.b_hat < 1.0 / kPositive;
  return r;
}

/// When gradients are comparable, J1 and positive Ł-weight should agree.
struct JacequivReport {
  bool applicable = false;
  ComparabilityReport comparability;
  bool j1_holds = false;
  double tau_hat = 0.0;
  double rho_inf_hat = 0.0;
  bool positive_weight = false;
  bool consistent = true;
  double bracket_low = 0.0;   ///< 2A / (1 + B^2)
  double bracket_high = 0.0;  ///< 2B / (1 + A^2)
  bool bracket_ok = true;
};

inline JacequivReport jacequiv_crosscheck(const AnalyticMap& map, const RegionSpec& region) {
  if (map.k() != 2) throw InputError("jacequiv_crosscheck: requires k = 2");
  JacequivReport r;
  r.comparability = comparability(map, region);
  if (!r.comparability.comparable) return r;
  r.applicable = true;
  const J1Report j1 = jacquemard_j1(map, region);
  r.j1_holds = j1.holds;
  r.tau_hat = j1.tau_hat;
  const WeightReport w = rho_inf_estimate(map, region);
  r.rho_inf_hat = w.rho_inf_hat;
  r.positive_weight = w.rho_inf_hat > kPositive;
  r.consistent = r.j1_holds == r.positive_weight;

  const double a = r.comparability.a_hat, b = r.comparability.b_hat;
  r.bracket_low = 2.0 * a / (1.0 + b * b);
  r.bracket_high = 2.0 * b / (1.0 + a * a);
  constexpr double rel = 1e-12;
  for (const Point& x : sample_region(region)) {
    const GradientFrame f = map.gradient_frame(x);
    const double tr = trace(f.m);
    if (!(tr > kZeroTrace)) continue;
    const double factor = 2.0 * std::sqrt(f.m(0, 0)) * std::sqrt(f.m(1, 1)) / tr;
    const double rho_x = rho(f).rho;
    if (factor < r.bracket_low * (1.0 - rel) || factor > r.bracket_high * (1.0 + rel) ||
        rho_x > r.bracket_high * (1.0 + rel))
      r.bracket_ok = false;
  }
  return r;
}

/// Per-sample check of rho_{G o H}(x) against the composition lower bound,
/// and of rho_{G o H}(x) = rho_G(H(x)) when H is simple on the region.
struct CompositionCheck {
  std::size_t samples_checked = 0;
  std::size_t bound_violations = 0;
  double min_margin = std::numeric_limits<double>::infinity();  ///< min of rho - bound
  bool h_simple = false;
  double h_simple_deviation = 0.0;
  std::size_t easycomp_checked = 0;
  std::size_t easycomp_violations = 0;
  double easycomp_max_error = 0.0;
  std::optional<Point> first_violation;
  bool holds = true;
};

inline CompositionCheck composition_weight_check(const AnalyticMap& g, const AnalyticMap& h, const RegionSpec& region) {
  if (h.k() != g.n()) throw InputError("composition_weight_check: H codomain must equal G domain");
  if (region.center.size() != h.n()) throw InputError("composition_weight_check: region lives in H's domain");
  const AnalyticMap gh = compose(g, h);
  const std::vector<Point> samples = sample_region(region);

  CompositionCheck r;
  for (const Point& x : samples) r.h_simple_deviation = std::max(r.h_simple_deviation, simple_deviation(h.gradient_frame(x).m));
  r.h_simple = r.h_simple_deviation <= 1e-9;

  for (const Point& x : samples) {
    const GradientFrame fc = gh.gradient_frame(x);
    if (!(trace(fc.m) > kZeroTrace)) continue;
    ++r.samples_checked;
    const double rho_c = rho(fc).rho;
    const GradientFrame fb = h.gradient_frame(x);
    const GradientFrame fa = g.gradient_frame(Point(h.eval(x)));
    const double bound = slw_lower_bound(singular_values(fa.a), singular_values(fb.a), h.k());
    r.min_margin = std::min(r.min_margin, rho_c - bound);
    bool bad = rho_c < bound - 1e-9;
    if (r.h_simple) {
      const RhoValue rg = rho(fa);
      ++r.easycomp_checked;
      const double err = rg.defined ? std::abs(rho_c - rg.rho) : std::numeric_limits<double>::infinity();
      r.easycomp_max_error = std::max(r.easycomp_max_error, err);
      if (!(err <= 1e-8)) {
        ++r.easycomp_violations;
        bad = true;
      }
    }
    if (rho_c < bound - 1e-9) ++r.bound_violations;
    if (bad && !r.first_violation) r.first_violation = x;
  }
  r.holds = r.bound_violations == 0 && r.easycomp_violations == 0;
  return r;
}

}  // namespace milnorkit
