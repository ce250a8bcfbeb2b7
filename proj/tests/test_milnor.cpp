#include <gtest/gtest.h>

#include <cmath>

#include "milnorkit/corpus.hpp"
#include "milnorkit/generators.hpp"
#include "milnorkit/milnor.hpp"

using namespace milnorkit;

namespace {

RegionSpec at_origin(std::size_t n, double radius = 0.5, std::size_t levels = 32, std::size_t directions = 64,
                     std::uint64_t seed = 42) {
  return RegionSpec::ball(Point::origin(n), radius, levels, directions, seed);
}

AnalyticMap scaled(const AnalyticMap& m, double s) {
  std::vector<Expr> comps;
  for (const Expr& c : m.components()) comps.push_back(Expr::constant(s) * c);
  return AnalyticMap(m.n(), comps, "scaled");
}

}  // namespace

TEST(Probe, ComplexSquareOnAxis) {
  const DependenceProbe p = probe(corpus::z_power(2), Point{1, 0});
  EXPECT_NEAR(p.sigma_k_norm, 1, 1e-15);
  EXPECT_EQ(p.sigma_aug_norm, 0.0);
  EXPECT_NEAR(p.f_norm, 1, 1e-15);
  EXPECT_EQ(p.radius, 1.0);
}

TEST(Probe, OriginHasZeroAugmentedColumn) {
  for (const AnalyticMap& m : {corpus::z_power(3), corpus::zbar_w2(), identity_map(3)})
    EXPECT_EQ(probe(m, Point::origin(m.n())).sigma_aug_norm, 0.0) << m.label();
}

TEST(Probe, DependentGradientsOffZeroSet) {
  const DependenceProbe p = probe(corpus::x2y2_x(), Point{1, 0});
  EXPECT_EQ(p.sigma_k_norm, 0.0);
  EXPECT_NEAR(p.f_norm, std::sqrt(2.0), 1e-15);
}

TEST(Probe, FieldsInRange) {
  Rng rng(1);
  for (int t = 0; t < 200; ++t) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, 4));
    const AnalyticMap m = gen::polynomial_map(rng, n, static_cast<std::size_t>(rng.uniform_int(1, 3)), 3);
    const DependenceProbe p = probe(m, gen::point(rng, n));
    for (double v : {p.sigma_k_norm, p.sigma_aug_norm}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1 + 1e-10);
    }
    EXPECT_TRUE(std::isfinite(p.f_norm) && p.f_norm >= 0);
  }
}

TEST(Probe, ScaleInvariantUnderCommonFactor) {
  Rng rng(2);
  for (const AnalyticMap& m : {corpus::z_power(2), corpus::shear_z2(), corpus::zbar_w2()}) {
    const AnalyticMap m2 = scaled(m, 2.0);
    for (int t = 0; t < 20; ++t) {
      const Point x = gen::point(rng, m.n());
      EXPECT_NEAR(probe(m, x).sigma_k_norm, probe(m2, x).sigma_k_norm, 1e-12);
    }
  }
}

TEST(MilnorA, ComplexPowersHold) {
  for (unsigned d = 1; d <= 4; ++d) {
    const ConditionReport r = milnor_a_scan(corpus::z_power(d), at_origin(2));
    EXPECT_TRUE(r.holds) << d;
    EXPECT_TRUE(r.witnesses.empty());
    EXPECT_EQ(r.samples_scanned, 32u * 64u);
  }
}

TEST(MilnorA, SumOfSquaresAndXFailsNearXAxis) {
  const AnalyticMap m = corpus::x2y2_x();
  const ConditionReport r = milnor_a_scan(m, at_origin(2, 1.0));
  EXPECT_FALSE(r.holds);
  ASSERT_FALSE(r.witnesses.empty());
  for (const DependenceProbe& w : r.witnesses) {
    EXPECT_LT(std::abs(w.x[1]), 1e-8);
    EXPECT_GT(w.f_norm, 1e-8);
    EXPECT_NEAR(w.f_norm, std::hypot(w.x[0] * w.x[0] + w.x[1] * w.x[1], w.x[0]), 1e-20);
  }
}

TEST(MilnorA, IdentityHolds) { EXPECT_TRUE(milnor_a_scan(identity_map(3), at_origin(3)).holds); }

TEST(MilnorA, VerdictMatchesWitnesses) {
  for (const auto& [name, m] : corpus::all()) {
    const ConditionReport r = milnor_a_scan(m, at_origin(m.n(), 0.5, 12, 16));
    EXPECT_EQ(r.holds, r.witness_count == 0) << name;
    EXPECT_LE(r.witnesses.size(), kMaxWitnesses);
  }
}

TEST(MilnorB, ComplexSquareHolds) {
  const ConditionReport r = milnor_b_scan(corpus::z_power(2), at_origin(2));
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.tolerances.r_min, 0.005);
}

TEST(MilnorB, IdentityHolds) { EXPECT_TRUE(milnor_b_scan(identity_map(3), at_origin(3)).holds); }

TEST(MilnorB, SimpleCorpusHolds) {
  for (const AnalyticMap& m : {corpus::z_power(3), corpus::zbar_w2()}) EXPECT_TRUE(milnor_b_scan(m, at_origin(m.n())).holds);
}

TEST(MilnorB, XTimesXYRegression) {
  // Seed-42 baseline: the on-axis points (0, y) never land within tol_f of X at
  // a radius above r_min, so nothing is reported.
  const ConditionReport r = milnor_b_scan(corpus::x_xy(), at_origin(2));
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.witness_count, 0u);
}

TEST(MilnorB, ExplicitRMinRecorded) {
  const ConditionReport r = milnor_b_scan(corpus::z_power(2), at_origin(2), 1e-8, 1e-8, 1e-3);
  EXPECT_EQ(r.tolerances.r_min, 1e-3);
}

TEST(MilnorRadius, ComplexSquareLargest) {
  const RadiusEstimate r = milnor_radius_estimate(corpus::z_power(2), {1, 0.5, 0.1});
  ASSERT_TRUE(r.epsilon.has_value());
  EXPECT_EQ(*r.epsilon, 1.0);
}

TEST(MilnorRadius, SumOfSquaresAndXNone) {
  const RadiusEstimate r = milnor_radius_estimate(corpus::x2y2_x(), {1, 0.1, 0.01});
  EXPECT_FALSE(r.epsilon.has_value());
  for (const RadiusTrial& t : r.trials) EXPECT_FALSE(t.a.holds) << t.epsilon;
}

TEST(MilnorRadius, IdentityLargestGiven) {
  const RadiusEstimate r = milnor_radius_estimate(identity_map(2), {2, 1});
  ASSERT_TRUE(r.epsilon.has_value());
  EXPECT_EQ(*r.epsilon, 2.0);
}

TEST(MilnorPair, ComplexSquareHoldsWithMargin) {
  const MilnorPairEstimate e = milnor_pair_scan(corpus::z_power(2), 1.0, 0.01);
  EXPECT_TRUE(e.holds);
  EXPECT_GT(e.transversality_margin, 0.5);
  EXPECT_EQ(e.failed_projections, 0u);
  for (const DependenceProbe& p : e.tube_points) EXPECT_NEAR(p.f_norm, 0.01, 1e-10);
}

TEST(MilnorPair, EmptyTubeIsInsufficientData) {
  try {
    milnor_pair_scan(corpus::z_power(2), 1.0, 2.0);
    FAIL();
  } catch (const InsufficientDataError& e) {
    EXPECT_EQ(e.operation(), "milnor_pair_scan");
  }
}

TEST(MilnorPair, SumOfSquaresAndXFails) {
  const MilnorPairEstimate e = milnor_pair_scan(corpus::x2y2_x(), 1.0, 0.01);
  EXPECT_FALSE(e.holds);
  ASSERT_FALSE(e.witnesses.empty());
  for (const DependenceProbe& w : e.witnesses) EXPECT_LT(std::abs(w.x[1]), 1e-6);
}

TEST(MilnorPair, BoundaryBandVisitedForConjugateSquare) {
  const MilnorPairEstimate e = milnor_pair_scan(corpus::zbar_w2(), 1.0, 0.01);
  EXPECT_TRUE(e.holds);
  EXPECT_GT(e.boundary_checked, 0u);
  EXPECT_GT(e.interior_checked, 0u);
}

TEST(MilnorPair, MonotoneInDeltaOnCorpus) {
  // Regression property, not a theorem: shrinking delta keeps a passing pair passing.
  Rng rng(3);
  for (const AnalyticMap& m : {corpus::z_power(2), corpus::z_power(3), corpus::zbar_w2()}) {
    const double delta = 0.02;
    ASSERT_TRUE(milnor_pair_scan(m, 1.0, delta).holds);
    for (int t = 0; t < 3; ++t) EXPECT_TRUE(milnor_pair_scan(m, 1.0, rng.uniform(delta / 2, delta)).holds) << m.label();
  }
}

TEST(MilnorPair, PreconditionsChecked) {
  EXPECT_THROW(milnor_pair_scan(corpus::z_power(2), 1.0, 0.0), PreconditionError);
  EXPECT_THROW(milnor_pair_scan(corpus::z_power(2), 1.0, 0.01, 999), PreconditionError);
}

TEST(Omega, ComplexSquareClosedForm) {
  Rng rng(4);
  for (int t = 0; t < 50; ++t) {
    const Point p = gen::point(rng, 2);
    const double x = p[0], y = p[1], r2 = x * x + y * y;
    const Vector w = omega_field(corpus::z_power(2), p);
    EXPECT_NEAR(w[0], -2 * y * r2, 1e-14);
    EXPECT_NEAR(w[1], 2 * x * r2, 1e-14);
  }
}

TEST(Omega, IdentityAtOneOne) { EXPECT_EQ(omega_field(identity_map(2), Point{1, 1}), (Vector{-1, 1})); }

TEST(Omega, VanishesOnZeroSet) {
  const AnalyticMap f = corpus::zbar_w2();
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    for (const Point& x : {Point{0, 0, rng.uniform(-1, 1), rng.uniform(-1, 1)},
                           Point{rng.uniform(-1, 1), rng.uniform(-1, 1), 0, 0}}) {
      ASSERT_LE(norm(f.eval(x)), 1e-14);
      EXPECT_LE(norm(omega_field(f, x)), 1e-12);
    }
  }
}

TEST(Omega, RequiresPair) { EXPECT_THROW(omega_field(identity_map(3), Point{1, 2, 3}), InputError); }

TEST(ConditionC, ComplexSquareHolds) {
  const RegionSpec region = at_origin(2);
  const ConditionCReport c = condition_c_scan(corpus::z_power(2), region);
  EXPECT_TRUE(c.report.holds);
  EXPECT_GT(c.in_band, 0u);
  EXPECT_GT(c.min_lhs, 0);
  EXPECT_LE(c.max_abs_rhs, 1e-9);
  // Independent closed form: lhs = |omega|^2 * 4 |z|^4 with |omega| = 2 |z|^3.
  for (const Point& x : sample_region(at_origin(2, 0.5, 4, 8))) {
    const double r = x.norm();
    const auto t = detail::c_terms(corpus::z_power(2), x);
    EXPECT_NEAR(dot(t.omega, t.omega) * dot(x.coords(), t.grad_f2), 4 * std::pow(r, 6) * 4 * std::pow(r, 4),
                1e-10 * 16 * std::pow(r, 10));
  }
}

TEST(ConditionC, SimpleCorpusHolds) {
  for (const AnalyticMap& m : {corpus::z_power(3), corpus::zbar_w2()}) {
    const ConditionCReport c = condition_c_scan(m, at_origin(m.n()));
    EXPECT_TRUE(c.report.holds) << m.label();
    EXPECT_LE(c.max_abs_rhs, 1e-9);
  }
}

TEST(ConditionC, IdentityRegression) {
  // f = (x, y): x always in the span; lhs = |omega|^2 2|x|^2, rhs = (2x . omega)(x . omega) = 0.
  const ConditionCReport c = condition_c_scan(identity_map(2), at_origin(2));
  EXPECT_TRUE(c.report.holds);
  EXPECT_EQ(c.in_band, c.off_x);
}

TEST(ConditionC, ZeroSetSamplesExcluded) {
  // A one-point region at the origin of z^2 lies on X and is skipped.
  const ConditionCReport c = condition_c_scan(corpus::z_power(2), RegionSpec::ball(Point{0, 0}, 1e-200, 1, 4));
  EXPECT_EQ(c.off_x, 0u);
  EXPECT_TRUE(c.report.holds);
}

TEST(SimpleCFacts, HoldOnSimpleCorpus) {
  for (const AnalyticMap& m : {corpus::z_power(2), corpus::z_power(3), corpus::zbar_w2()}) {
    const SimpleCFacts s = simple_c_facts(m, at_origin(m.n()));
    EXPECT_TRUE(s.applicable) << m.label();
    EXPECT_TRUE(s.holds) << m.label();
    EXPECT_GT(s.min_x_dot_grad, 0);
    EXPECT_LE(s.max_grad_dot_omega, 1e-9);
  }
}

TEST(SimpleCFacts, NotApplicableToShear) { EXPECT_FALSE(simple_c_facts(corpus::shear_z2(), at_origin(2)).applicable); }
