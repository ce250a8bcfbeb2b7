#pragma once

// JSON views of the report records. Keys keep declaration order; non-finite
// numbers (an infinite comparability bound, an empty minimum) become null.

#include <nlohmann/json.hpp>

#include "milnorkit/linalg.hpp"
#include "milnorkit/loja.hpp"
#include "milnorkit/milnor.hpp"
#include "milnorkit/region.hpp"
#include "milnorkit/spectra.hpp"

namespace milnorkit {

using ojson = nlohmann::ordered_json;

inline ojson num(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

inline ojson to_json(const Point& p) {
  ojson a = ojson::array();
  for (double c : p.coords()) a.push_back(c);
  return a;
}

inline ojson to_json(const Matrix& m) {
  ojson rows = ojson::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    ojson r = ojson::array();
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(std::move(r));
  }
  return rows;
}

/// Row-major array of arrays -> Matrix.
inline Matrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw InputError("matrix: expected an array of rows");
  std::vector<Vector> rows;
  for (const auto& r : j) {
    if (!r.is_array()) throw InputError("matrix: each row must be an array");
    Vector row;
    for (const auto& v : r) {
      if (!v.is_number()) throw InputError("matrix: entries must be numbers");
      row.push_back(v.get<double>());
    }
    rows.push_back(std::move(row));
  }
  return Matrix::from_rows(rows);
}

inline ojson to_json(const RegionSpec& r) {
  return ojson{{"center", to_json(r.center)},
               {"radius", r.radius},
               {"radial_levels", r.radial_levels},
               {"directions_per_level", r.directions_per_level},
               {"seed", r.seed}};
}

inline ojson to_json(const SingularSpectrum& s) {
  return ojson{{"sigmas", s.sigmas}, {"trace", s.trace}, {"det_gram", s.det_gram}};
}

inline ojson to_json(const WeightReport& w) {
  return ojson{{"rho_inf_hat", w.rho_inf_hat},
               {"min_witness", to_json(w.min_witness)},
               {"samples", w.samples},
               {"excluded_count", w.excluded_count},
               {"simple_deviation", w.simple_deviation}};
}

inline ojson to_json(const LojaEstimate& e) {
  return ojson{{"theta_hat", e.theta_hat},   {"c_hat", e.c_hat},
               {"samples_used", e.samples_used}, {"max_residual", num(e.max_residual)},
               {"valid", e.valid},           {"variant", to_string(e.variant)},
               {"c_mode", to_string(e.c_mode)}};
}

inline ojson to_json(const EquivalenceReport& r) {
  return ojson{{"inf_rho", r.inf_rho},
               {"inf_sigma_k_over_root_trace", r.inf_sigma_k_over_root_trace},
               {"inf_sigma_k_over_sigma_1", r.inf_sigma_k_over_sigma_1},
               {"samples", r.samples},
               {"consistent", r.consistent}};
}

inline ojson to_json(const J1Report& r) {
  return ojson{{"max_abs_cos", r.max_abs_cos},
               {"tau_hat", r.tau_hat},
               {"holds", r.holds},
               {"samples", r.samples},
               {"witness", to_json(r.witness)}};
}

inline ojson to_json(const ComparabilityReport& r) {
  return ojson{{"a_hat", num(r.a_hat)}, {"b_hat", num(r.b_hat)}, {"comparable", r.comparable}, {"samples", r.samples}};
}

inline ojson to_json(const JacequivReport& r) {
  return ojson{{"applicable", r.applicable},
               {"comparability", to_json(r.comparability)},
               {"j1_holds", r.j1_holds},
               {"tau_hat", r.tau_hat},
               {"rho_inf_hat", r.rho_inf_hat},
               {"positive_weight", r.positive_weight},
               {"consistent", r.consistent},
               {"bracket_low", num(r.bracket_low)},
               {"bracket_high", num(r.bracket_high)},
               {"bracket_ok", r.bracket_ok}};
}

inline ojson to_json(const CompositionCheck& r) {
  ojson j{{"samples_checked", r.samples_checked},
          {"bound_violations", r.bound_violations},
          {"min_margin", num(r.min_margin)},
          {"h_simple", r.h_simple},
          {"h_simple_deviation", r.h_simple_deviation},
          {"easycomp_checked", r.easycomp_checked},
          {"easycomp_violations", r.easycomp_violations},
          {"easycomp_max_error", num(r.easycomp_max_error)},
          {"holds", r.holds}};
  j["first_violation"] = r.first_violation ? to_json(*r.first_violation) : ojson(nullptr);
  return j;
}

inline ojson to_json(const DependenceProbe& p) {
  return ojson{{"x", to_json(p.x)},
               {"sigma_k_norm", p.sigma_k_norm},
               {"sigma_aug_norm", p.sigma_aug_norm},
               {"f_norm", p.f_norm},
               {"radius", p.radius}};
}

inline ojson to_json(const ConditionReport& r) {
  ojson w = ojson::array();
  for (const auto& p : r.witnesses) w.push_back(to_json(p));
  return ojson{{"condition", to_string(r.condition)},
               {"verdict", r.holds ? "holds-on-samples" : "fails"},
               {"witness_count", r.witness_count},
               {"witnesses", std::move(w)},
               {"tolerances", {{"tol_dep", r.tolerances.tol_dep}, {"tol_f", r.tolerances.tol_f}, {"r_min", r.tolerances.r_min}}},
               {"samples_scanned", r.samples_scanned}};
}

inline ojson to_json(const RadiusEstimate& r) {
  ojson trials = ojson::array();
  for (const auto& t : r.trials)
    trials.push_back(ojson{{"epsilon", t.epsilon}, {"passes", t.passes()}, {"a", to_json(t.a)}, {"b", to_json(t.b)}});
  return ojson{{"epsilon", r.epsilon ? ojson(*r.epsilon) : ojson(nullptr)}, {"trials", std::move(trials)}};
}

inline ojson to_json(const MilnorPairEstimate& e) {
  ojson w = ojson::array();
  for (const auto& p : e.witnesses) w.push_back(to_json(p));
  return ojson{{"epsilon", e.epsilon},
               {"delta", e.delta},
               {"transversality_margin", num(e.transversality_margin)},
               {"verdict", e.holds ? "holds-on-samples" : "fails"},
               {"tol_dep", e.tol_dep},
               {"draws", e.draws},
               {"failed_projections", e.failed_projections},
               {"corner_draws", e.corner_draws},
               {"corner_converged", e.corner_converged},
               {"interior_checked", e.interior_checked},
               {"boundary_checked", e.boundary_checked},
               {"witnesses", std::move(w)}};
}

inline ojson to_json(const ConditionCReport& c) {
  ojson j = to_json(c.report);
  j["span_tol"] = c.span_tol;
  j["off_x"] = c.off_x;
  j["in_band"] = c.in_band;
  j["min_lhs"] = num(c.min_lhs);
  j["max_abs_rhs"] = c.max_abs_rhs;
  return j;
}

inline ojson to_json(const SimpleCFacts& s) {
  return ojson{{"applicable", s.applicable},
               {"holds", s.holds},
               {"samples", s.samples},
               {"violations", s.violations},
               {"min_x_dot_grad", num(s.min_x_dot_grad)},
               {"max_grad_dot_omega", s.max_grad_dot_omega},
               {"simple_deviation", s.simple_deviation}};
}

}  // namespace milnorkit
