#pragma once

// Randomized property suites behind `milnorkit --command verify`. Every trial
// derives its own seed from (seed, trial) so a failure can be replayed alone;
// the first failing input of each property is kept in the summary.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "milnorkit/corpus.hpp"
#include "milnorkit/generators.hpp"
#include "milnorkit/loja.hpp"
#include "milnorkit/map_json.hpp"
#include "milnorkit/milnor.hpp"
#include "milnorkit/report_json.hpp"
#include "milnorkit/spectra.hpp"

namespace milnorkit {

struct PropertyResult {
  std::string name;
  std::size_t passed = 0;
  std::size_t failed = 0;
  ojson first_failure;
};

struct VerifySummary {
  std::string suite;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<PropertyResult> properties;

  bool all_passed() const {
    for (const auto& p : properties)
      if (p.failed) return false;
    return true;
  }
};

inline ojson to_json(const VerifySummary& s) {
  ojson props = ojson::array();
  for (const auto& p : s.properties)
    props.push_back(ojson{{"name", p.name}, {"passed", p.passed}, {"failed", p.failed}, {"first_failure", p.first_failure}});
  return ojson{{"suite", s.suite}, {"trials", s.trials}, {"seed", s.seed}, {"all_passed", s.all_passed()}, {"properties", props}};
}

namespace detail {

/// splitmix64 finalizer; decorrelates per-trial seeds.
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (trial + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

class Tally {
 public:
  explicit Tally(VerifySummary& s) : s_(s) {}

  void record(const std::string& name, bool ok, const std::function<ojson()>& describe) {
    PropertyResult* slot = nullptr;
    for (auto& p : s_.properties)
      if (p.name == name) slot = &p;
    if (!slot) {
      s_.properties.emplace_back();
      s_.properties.back().name = name;
      slot = &s_.properties.back();
    }
    if (ok) {
      ++slot->passed;
    } else {
      if (slot->failed == 0) slot->first_failure = describe();
      ++slot->failed;
    }
  }

 private:
  VerifySummary& s_;
};

inline void spectra_trial(Tally& t, std::uint64_t seed) {
  Rng rng(seed);
  const auto n = static_cast<std::size_t>(rng.uniform_int(1, 6));
  const auto k = static_cast<std::size_t>(rng.uniform_int(1, 4));
  const auto m = static_cast<std::size_t>(rng.uniform_int(1, 6));
  const Matrix a = gen::matrix(rng, n, k);
  const Matrix b = gen::matrix(rng, m, n);
  auto inputs = [&] { return ojson{{"trial_seed", seed}, {"A", to_json(a)}, {"B", to_json(b)}}; };

  const SingularSpectrum sa = singular_values(a);
  double sum_sq = 0.0;
  for (double s : sa.sigmas) sum_sq += s * s;
  t.record("trace_equals_sum_of_squares", std::abs(sum_sq - sa.trace) <= 1e-10 * sa.trace, inputs);

  // Item 1: dependent columns give sigma_k = 0; independent ones do not.
  Matrix dep = a;
  for (std::size_t i = 0; i < n; ++i) {
    double v = 0.0;
    for (std::size_t j = 0; j + 1 < k; ++j) v += (j + 1.0) * a(i, j);
    dep(i, k - 1) = v;
  }
  const SingularSpectrum sd = singular_values(dep);
  t.record("singval_dependent_columns", sd.sigma_min() <= 1e-7 * std::max(sd.sigma_max(), 1e-300), inputs);
  if (n >= k) t.record("singval_independent_columns", sa.sigma_min() > 0.0, inputs);

  if (sa.trace > 0.0) {
    const double r = sa.sigma_max() / std::sqrt(sa.trace);
    t.record("singval_sigma1_bounds", r >= 1.0 / std::sqrt(static_cast<double>(k)) - 1e-10 && r <= 1.0 + 1e-10, inputs);
  }
  t.record("singval_geom_mean", check_geom_mean(gram(a)).holds, inputs);

  const SingularSpectrum st = singular_values(transpose(a));
  bool same = true;
  for (std::size_t i = 0; i < std::min(n, k); ++i)
    same = same && std::abs(sa.sigmas[i] * sa.sigmas[i] - st.sigmas[i] * st.sigmas[i]) <= 1e-10 * sa.trace + 1e-300;
  t.record("transpose_same_singular_values", same, inputs);

  t.record("prodsv", check_prodsv(a, b).holds, inputs);
  t.record("trace_sandwich", check_trace_sandwich(a, b).holds, inputs);
  if (trace(gram(b * a)) > kZeroTrace) t.record("slw_bound", check_slw_bound(a, b).holds, inputs);

  t.record("oracle_upper_bound", sigma_min_oracle(a, 200, seed) >= sa.sigma_min() - 1e-6, inputs);

  const RhoValue rv = rho_from_gram(gram(a), std::min(n, k));
  if (rv.defined) t.record("rho_in_unit_interval", rv.rho >= 0.0 && rv.rho <= 1.0 + 1e-10, inputs);
  if (k == 2 && rv.defined) {
    const GradientFrame f{Point::origin(n), a, gram(a)};
    t.record("rho_matches_angle_formula", std::abs(rv.rho - rho_f_angle(f)) <= 1e-8, inputs);
  }

  Matrix pert = a;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) pert(i, j) += rng.uniform(-1e-8, 1e-8);
  const SingularSpectrum sp = singular_values(pert);
  bool cont = true;
  for (std::size_t i = 0; i < k; ++i) cont = cont && std::abs(sp.sigmas[i] - sa.sigmas[i]) <= 1e-6;
  t.record("singular_values_continuous", cont, inputs);

  if (k <= n) {
    const Matrix eq = gen::orthogonal_equal_frame(rng, n, k);
    const GeomMeanCheck ge = check_geom_mean(gram(eq));
    t.record("geom_mean_equality_on_orthogonal_equal_frames", ge.holds && ge.means_equal && ge.eigenvalues_equal,
             [&] { return ojson{{"trial_seed", seed}, {"frame", to_json(eq)}}; });
    if (k >= 2) {
      Matrix bent = eq;
      const double factor = 1.0 + rng.uniform(0.05, 0.5);
      for (std::size_t i = 0; i < n; ++i) bent(i, 0) *= factor;
      const GeomMeanCheck gb = check_geom_mean(gram(bent));
      t.record("geom_mean_strict_on_perturbed_frames", gb.holds && !gb.means_equal && !gb.eigenvalues_equal,
               [&] { return ojson{{"trial_seed", seed}, {"frame", to_json(bent)}}; });
    }
  }
}

inline void loja_trial(Tally& t, std::uint64_t seed) {
  Rng rng(seed);
  {
    const auto m = static_cast<std::size_t>(rng.uniform_int(1, 3));
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, 3));
    const auto k = static_cast<std::size_t>(rng.uniform_int(1, 3));
    const AnalyticMap h = gen::polynomial_map(rng, m, n, 3);
    const AnalyticMap g = gen::polynomial_map(rng, n, k, 3);
    const RegionSpec region = RegionSpec::ball(gen::point(rng, m), 0.5, 2, 4, seed);
    auto inputs = [&] {
      return ojson{{"trial_seed", seed}, {"G", ojson::parse(serialize_map(g))}, {"H", ojson::parse(serialize_map(h))},
                   {"region", to_json(region)}};
    };
    const CompositionCheck cc = composition_weight_check(g, h, region);
    t.record("composition_lower_bound", cc.bound_violations == 0, inputs);

    bool in_range = true;
    for (const Point& x : sample_region(region)) {
      const RhoValue v = rho(g.gradient_frame(Point(h.eval(x))));
      if (v.defined) in_range = in_range && v.rho >= 0.0 && v.rho <= 1.0 + 1e-10;
    }
    t.record("rho_in_unit_interval", in_range, inputs);
    t.record("equivalence_consistency", equivalence_report(h, region).consistent, inputs);
  }
  {
    const AnalyticMap h = corpus::z_power(rng.uniform() < 0.5 ? 2 : 3);
    const auto k = static_cast<std::size_t>(rng.uniform_int(1, 2));
    const AnalyticMap g = rng.uniform() < 0.5 ? linear_map(gen::matrix(rng, k, 2)) : gen::polynomial_map(rng, 2, k, 3);
    const RegionSpec region = RegionSpec::ball(gen::point(rng, 2), 0.5, 2, 8, seed);
    const CompositionCheck cc = composition_weight_check(g, h, region);
    t.record("easycomp_equality", cc.h_simple && cc.easycomp_violations == 0 && cc.bound_violations == 0, [&] {
      return ojson{{"trial_seed", seed}, {"G", ojson::parse(serialize_map(g))}, {"H", h.label()}, {"region", to_json(region)}};
    });
  }
  {
    Matrix l = gen::matrix(rng, 2, 2);
    if (std::abs(l(0, 0) * l(1, 1) - l(0, 1) * l(1, 0)) < 0.05) l(0, 0) += 1.0;
    const std::vector<AnalyticMap> maps{corpus::z_power(2), corpus::shear_z2(), linear_map(l), corpus::linear_1234(),
                                        corpus::parallel()};
    const RegionSpec region = RegionSpec::ball(Point::origin(2), 0.5, 4, 8, seed);
    for (const AnalyticMap& f : maps) {
      const JacequivReport j = jacequiv_crosscheck(f, region);
      t.record("jacequiv_consistency", j.applicable && j.consistent && j.bracket_ok,
               [&] { return ojson{{"trial_seed", seed}, {"map", ojson::parse(serialize_map(f))}}; });
    }
  }
}

inline void milnor_trial(Tally& t, std::uint64_t seed) {
  Rng rng(seed);
  const std::vector<AnalyticMap> simple{corpus::z_power(2), corpus::z_power(3), corpus::zbar_w2()};
  for (const AnalyticMap& f : simple) {
    const RegionSpec region = RegionSpec::ball(Point::origin(f.n()), 1.0, 8, 16, seed);
    auto inputs = [&] { return ojson{{"trial_seed", seed}, {"map", f.label()}, {"region", to_json(region)}}; };
    t.record("milnor_a_holds_on_simple_maps", milnor_a_scan(f, region).holds, inputs);
    t.record("milnor_b_holds_on_simple_maps", milnor_b_scan(f, region).holds, inputs);
    t.record("condition_c_holds_on_simple_maps", condition_c_scan(f, region).report.holds, inputs);
    t.record("simple_c_facts", simple_c_facts(f, region).holds, inputs);

    const Point x = gen::point(rng, f.n());
    const AnalyticMap doubled(f.n(), {Expr::constant(2.0) * f.components()[0], Expr::constant(2.0) * f.components()[1]},
                              "2*" + f.label());
    const DependenceProbe p1 = probe(f, x), p2 = probe(doubled, x);
    t.record("probe_scale_invariant",
             std::abs(p1.sigma_k_norm - p2.sigma_k_norm) <= 1e-12,
             [&] { return ojson{{"trial_seed", seed}, {"map", f.label()}, {"x", to_json(x)}}; });
  }
  {
    // omega vanishes on X; for conj(z) w^2, X = {z = 0} u {w = 0}.
    const AnalyticMap f = corpus::zbar_w2();
    Vector a{0.0, 0.0, rng.uniform(-1, 1), rng.uniform(-1, 1)};
    Vector b{rng.uniform(-1, 1), rng.uniform(-1, 1), 0.0, 0.0};
    bool ok = true;
    for (const Vector& v : {a, b}) {
      const Point x(v);
      if (norm(f.eval(x)) <= 1e-14) ok = ok && norm(omega_field(f, x)) <= 1e-12;
    }
    t.record("omega_vanishes_on_zero_set", ok, [&] { return ojson{{"trial_seed", seed}}; });
  }
  {
    const AnalyticMap f = corpus::x2y2_x();
    const RegionSpec region = RegionSpec::ball(Point::origin(2), 1.0, 32, 64, seed);
    t.record("milnor_a_fails_on_x2y2_x", !milnor_a_scan(f, region).holds,
             [&] { return ojson{{"trial_seed", seed}, {"region", to_json(region)}}; });
  }
}

}  // namespace detail

/// Runs the named suite ("all", "spectra", "loja", "milnor") for `trials` trials.
inline VerifySummary verify(std::string_view suite, std::size_t trials, std::uint64_t seed) {
  if (trials < 1) throw InputError("verify: trials must be at least 1");
  if (suite != "all" && suite != "spectra" && suite != "loja" && suite != "milnor")
    throw InputError("verify: unknown suite '" + std::string(suite) + "'");
  VerifySummary s;
  s.suite = std::string(suite);
  s.trials = trials;
  s.seed = seed;
  detail::Tally tally(s);
  for (std::size_t i = 0; i < trials; ++i) {
    const std::uint64_t ts = detail::trial_seed(seed, i);
    if (suite == "all" || suite == "spectra") detail::spectra_trial(tally, ts);
    if (suite == "all" || suite == "loja") detail::loja_trial(tally, ts);
    if (suite == "all" || suite == "milnor") detail::milnor_trial(tally, ts);
  }
  return s;
}

}  // namespace milnorkit
