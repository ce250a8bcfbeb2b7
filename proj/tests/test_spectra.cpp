#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "milnorkit/corpus.hpp"
#include "milnorkit/generators.hpp"
#include "milnorkit/spectra.hpp"

using namespace milnorkit;

namespace {

// One-sided (Hestenes) Jacobi SVD: rotates column pairs of A until mutually
// orthogonal; the column norms are then the singular values. Works on A
// directly, never forming A^t A.
Vector hestenes_singular_values(Matrix a) {
  const std::size_t n = a.rows(), k = a.cols();
  for (int sweep = 0; sweep < 80; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < k; ++p)
      for (std::size_t q = p + 1; q < k; ++q) {
        double alpha = 0, beta = 0, gamma = 0;
        for (std::size_t i = 0; i < n; ++i) {
          alpha += a(i, p) * a(i, p);
          beta += a(i, q) * a(i, q);
          gamma += a(i, p) * a(i, q);
        }
        if (gamma == 0.0) continue;
        off = std::max(off, std::abs(gamma) / std::sqrt(alpha * beta));
        const double zeta = (beta - alpha) / (2 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1 + zeta * zeta));
        const double cs = 1 / std::sqrt(1 + t * t), sn = cs * t;
        for (std::size_t i = 0; i < n; ++i) {
          const double u = a(i, p), v = a(i, q);
          a(i, p) = cs * u - sn * v;
          a(i, q) = sn * u + cs * v;
        }
      }
    if (off < 1e-15) break;
  }
  Vector s(k);
  for (std::size_t j = 0; j < k; ++j) s[j] = norm(a.column(j));
  std::sort(s.rbegin(), s.rend());
  return s;
}

GradientFrame frame_of(const Matrix& a) { return {Point::origin(a.rows()), a, gram(a)}; }

Matrix cols(std::initializer_list<std::initializer_list<double>> c) {
  std::vector<Vector> v;
  for (const auto& x : c) v.emplace_back(x);
  return Matrix::from_columns(v);
}

}  // namespace

TEST(SingularValues, OrthonormalColumns) {
  const SingularSpectrum s = singular_values(cols({{1, 0}, {0, 1}}));
  EXPECT_EQ(s.sigmas, (Vector{1, 1}));
}

TEST(SingularValues, DiagonalDescending) {
  const SingularSpectrum s = singular_values(cols({{3, 0}, {0, 4}}));
  EXPECT_NEAR(s.sigmas[0], 4, 1e-15);
  EXPECT_NEAR(s.sigmas[1], 3, 1e-15);
}

TEST(SingularValues, DependentColumnsGiveZero) {
  EXPECT_EQ(singular_values(cols({{1, 0}, {1, 0}})).sigma_min(), 0.0);
}

TEST(SingularValues, DependentRandomColumnsNearZeroToFullPrecision) {
  Rng rng(5);
  for (int t = 0; t < 500; ++t) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(2, 6));
    const auto k = static_cast<std::size_t>(rng.uniform_int(2, static_cast<std::int64_t>(std::min<std::size_t>(n, 4))));
    Matrix a = gen::matrix(rng, n, k);
    for (std::size_t i = 0; i < n; ++i) a(i, k - 1) = 2 * a(i, 0) - a(i, k - 2);
    const SingularSpectrum s = singular_values(a);
    EXPECT_LE(s.sigma_min(), 1e-13 * s.sigma_max()) << "n=" << n << " k=" << k;
    EXPECT_NEAR(s.sigmas[k - 2], hestenes_singular_values(a)[k - 2], 1e-12 * s.sigma_max());
  }
}

TEST(SingularValues, MoreColumnsThanRowsGiveExactZeros) {
  Rng rng(1);
  const SingularSpectrum s = singular_values(gen::matrix(rng, 2, 4));
  EXPECT_EQ(s.sigmas[2], 0.0);
  EXPECT_EQ(s.sigmas[3], 0.0);
  EXPECT_EQ(s.det_gram, 0.0);
}

TEST(SingularValues, NonFiniteRejected) {
  Matrix a = Matrix::identity(2);
  a(0, 1) = NAN;
  EXPECT_THROW(singular_values(a), InputError);
}

TEST(SingularValues, AgreeWithOneSidedJacobiOracle) {
  Rng rng(2);
  for (int t = 0; t < 500; ++t) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, 6));
    const auto k = static_cast<std::size_t>(rng.uniform_int(1, 8));
    const Matrix a = gen::matrix(rng, n, k);
    const Vector want = hestenes_singular_values(a);
    const SingularSpectrum got = singular_values(a);
    ASSERT_EQ(got.sigmas.size(), k);
    const double s1 = want[0];
    for (std::size_t i = 0; i < k; ++i)
      EXPECT_NEAR(got.sigmas[i] * got.sigmas[i], want[i] * want[i], 1e-12 * s1 * s1) << "n=" << n << " k=" << k;
  }
}

TEST(SingularValues, JacobiPathForLargerK) {
  // Eigenvalues of a known symmetric matrix through the k >= 3 route.
  const Matrix q = [] {
    Rng rng(3);
    return gen::orthogonal_equal_frame(rng, 5, 5);
  }();
  Matrix d(5, 5);
  const Vector want{9, 4, 1, 0.25, 0.0};
  for (std::size_t i = 0; i < 5; ++i) d(i, i) = std::sqrt(want[i]);
  const Matrix a = q * d;  // columns q_i * sqrt(want_i) up to the common length
  const double len2 = gram(q)(0, 0);
  const SingularSpectrum s = singular_values(a);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(s.sigmas[i] * s.sigmas[i], want[i] * len2, 1e-12 * 9 * len2);
}

TEST(SingularValues, TraceIsSumOfSquares) {
  Rng rng(4);
  for (int t = 0; t < 200; ++t) {
    const Matrix a = gen::matrix(rng, 4, 3);
    const SingularSpectrum s = singular_values(a);
    double sum = 0;
    for (double v : s.sigmas) sum += v * v;
    EXPECT_NEAR(sum, s.trace, 1e-12 * s.trace);
    EXPECT_NEAR(s.trace, frobenius_norm(a) * frobenius_norm(a), 1e-12 * s.trace);
  }
}

TEST(SigmaMinOracle, IdentityBracket) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const double v = sigma_min_oracle(Matrix::identity(3), 1000, seed);
    EXPECT_GE(v, 1 - 1e-12);
    EXPECT_LE(v, 1 + 1e-12);
  }
}

TEST(SigmaMinOracle, DependentColumnsApproachZero) {
  // t = (1, -1)/sqrt(2) is approached by the search.
  EXPECT_LE(sigma_min_oracle(cols({{1, 0}, {1, 0}}), 100000, 42), 1e-6);
}

TEST(SigmaMinOracle, BoundsJacobiFromAboveAndConverges) {
  Rng rng(5);
  const Matrix a = gen::matrix(rng, 4, 3);
  const double sk = singular_values(a).sigma_min();
  const double coarse = sigma_min_oracle(a, 100, 9);
  const double fine = sigma_min_oracle(a, 100000, 9);
  EXPECT_GE(coarse, sk - 1e-6);
  EXPECT_GE(fine, sk - 1e-6);
  EXPECT_LE(fine, coarse + 1e-12);
  EXPECT_LE(fine - sk, 1e-9);
}

TEST(SigmaMinOracle, TooFewDirectionsRejected) {
  EXPECT_THROW(sigma_min_oracle(Matrix::identity(2), 99, 1), PreconditionError);
}

TEST(Rho, SimpleFrameIsOne) {
  const RhoValue r = rho(frame_of(Matrix::identity(2)));
  EXPECT_TRUE(r.defined);
  EXPECT_NEAR(r.rho, 1, 1e-15);
}

TEST(Rho, LinearMapClosedForm) {
  const RhoValue r = rho(corpus::linear_1234().gradient_frame(Point{0, 0}));
  const double a = 1, b = 2, c = 3, d = 4;
  EXPECT_NEAR(r.rho, 2 * std::abs(a * d - b * c) / (a * a + b * b + c * c + d * d), 1e-15);
  EXPECT_NEAR(rho_from_gram(gram(Matrix::from_rows({{1, 3}, {2, 4}}))).rho, 4.0 / 30, 1e-12);
}

TEST(Rho, DependentColumnsAreZero) {
  EXPECT_EQ(rho(frame_of(cols({{1, 2}, {2, 4}}))).rho, 0.0);
  EXPECT_NEAR(rho(frame_of(cols({{1, 2, 3}, {-2, -4, -6}, {0, 1, 0}}))).rho, 0.0, 1e-10);
}

TEST(Rho, UndefinedWhereDerivativeVanishes) { EXPECT_FALSE(rho(frame_of(Matrix(3, 2))).defined); }

TEST(Rho, GramAndFrameRoutesAgree) {
  Rng rng(6);
  for (int t = 0; t < 300; ++t) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, 6));
    const auto k = static_cast<std::size_t>(rng.uniform_int(1, 4));
    const Matrix a = gen::matrix(rng, n, k);
    EXPECT_NEAR(rho(frame_of(a)).rho, rho_from_gram(gram(a), std::min(n, k)).rho, 1e-7);
  }
}

TEST(RhoAngle, PerpendicularEqualLengths) {
  EXPECT_NEAR(rho_f_angle(frame_of(cols({{0, 2}, {-2, 0}}))), 1, 1e-15);
}

TEST(RhoAngle, ParallelIsZero) { EXPECT_EQ(rho_f_angle(frame_of(cols({{1, 1}, {3, 3}}))), 0.0); }

TEST(RhoAngle, CrossCheckAgainstRho) {
  const GradientFrame f = frame_of(cols({{1, 0}, {1, 1}}));
  EXPECT_NEAR(rho_f_angle(f), rho(f).rho, 1e-8);
  EXPECT_NEAR(rho_f_angle(f), 2.0 / 3.0, 1e-15);
}

TEST(RhoAngle, RequiresTwoColumns) { EXPECT_THROW(rho_f_angle(frame_of(Matrix::identity(3))), InputError); }

TEST(ProdSv, IdentityBGivesEquality) {
  Rng rng(7);
  const Matrix a = gen::matrix(rng, 3, 2);
  const ProdSvCheck c = check_prodsv(a, Matrix::identity(3));
  EXPECT_TRUE(c.holds);
  EXPECT_NEAR(c.sigma_k_ba, c.sigma_n_b_sigma_k_a, 1e-12);
}

TEST(ProdSv, RandomThreeByTwo) {
  Rng rng(8);
  const Matrix a = gen::matrix(rng, 3, 2), b = gen::matrix(rng, 3, 3);
  const ProdSvCheck c = check_prodsv(a, b);
  EXPECT_TRUE(c.holds);
  EXPECT_GE(c.sigma_k_ba - c.sigma_n_b_sigma_k_a, -1e-9);
}

TEST(ProdSv, ScalingByTwo) {
  Rng rng(9);
  const Matrix a = gen::matrix(rng, 3, 2);
  const ProdSvCheck c = check_prodsv(a, 2.0 * Matrix::identity(3));
  EXPECT_NEAR(c.sigma_k_ba, 2 * singular_values(a).sigma_min(), 1e-12);
}

TEST(ProdSv, ShapeMismatchRejected) {
  EXPECT_THROW(check_prodsv(Matrix(3, 2), Matrix(2, 2)), InputError);
}

TEST(TraceSandwich, IdentityEqualities) {
  const TraceSandwich t = check_trace_sandwich(Matrix::identity(3), Matrix::identity(3));
  EXPECT_TRUE(t.holds);
  EXPECT_NEAR(t.lower, 3, 1e-15);
  EXPECT_NEAR(t.trace, 3, 1e-15);
  EXPECT_NEAR(t.upper, 3, 1e-15);
}

TEST(TraceSandwich, RandomFourByTwo) {
  Rng rng(10);
  EXPECT_TRUE(check_trace_sandwich(gen::matrix(rng, 4, 2), gen::matrix(rng, 3, 4)).holds);
}

TEST(TraceSandwich, ZeroColumnLowerBoundIsZero) {
  Matrix a = Matrix::identity(3);
  a(2, 2) = 0;
  const TraceSandwich t = check_trace_sandwich(a, Matrix::identity(3));
  EXPECT_EQ(t.lower, 0.0);
  EXPECT_TRUE(t.holds);
}

TEST(Slw, IdentityBReducesToFrameBound) {
  Rng rng(11);
  const Matrix a = gen::matrix(rng, 3, 2);
  const SlwCheck s = check_slw_bound(a, Matrix::identity(3));
  const SingularSpectrum sa = singular_values(a);
  EXPECT_NEAR(s.lhs, rho(frame_of(a)).rho, 1e-12);
  EXPECT_NEAR(s.rhs, 2.0 / 3.0 * sa.sigma_min() * sa.sigma_min() / (sa.sigma_max() * sa.sigma_max()), 1e-12);
  EXPECT_TRUE(s.holds);
}

TEST(Slw, BothIdentityEquality) {
  const SlwCheck s = check_slw_bound(Matrix::identity(3), Matrix::identity(3));
  EXPECT_NEAR(s.lhs, 1, 1e-15);
  EXPECT_NEAR(s.rhs, 1, 1e-15);
  EXPECT_TRUE(s.holds);
}

TEST(Slw, RandomPairsNeverViolate) {
  Rng rng(12);
  for (int t = 0; t < 1000; ++t) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, 6));
    const Matrix a = gen::matrix(rng, n, static_cast<std::size_t>(rng.uniform_int(1, 4)));
    const Matrix b = gen::matrix(rng, static_cast<std::size_t>(rng.uniform_int(1, 6)), n);
    const SlwCheck s = check_slw_bound(a, b);
    EXPECT_GE(s.lhs - s.rhs, -1e-9);
  }
}

TEST(Slw, ZeroProductRejected) { EXPECT_THROW(check_slw_bound(Matrix::identity(2), Matrix(2, 2)), PreconditionError); }

TEST(GeomMean, ScalarMatrixIsEquality) {
  const GeomMeanCheck g = check_geom_mean(3.5 * Matrix::identity(4));
  EXPECT_TRUE(g.holds && g.means_equal && g.eigenvalues_equal);
}

TEST(GeomMean, DiagOneFour) {
  const GeomMeanCheck g = check_geom_mean(Matrix::from_rows({{1, 0}, {0, 4}}));
  EXPECT_NEAR(g.geometric, 4, 1e-15);
  EXPECT_NEAR(g.trace, 5, 1e-15);
  EXPECT_TRUE(g.holds);
  EXPECT_FALSE(g.means_equal);
  EXPECT_FALSE(g.eigenvalues_equal);
}

TEST(GeomMean, ZeroMatrix) {
  const GeomMeanCheck g = check_geom_mean(Matrix(3, 3));
  EXPECT_EQ(g.geometric, 0.0);
  EXPECT_EQ(g.trace, 0.0);
  EXPECT_TRUE(g.holds);
}

TEST(GeomMean, EqualityCharacterization) {
  Rng rng(13);
  for (int t = 0; t < 100; ++t) {
    const auto k = static_cast<std::size_t>(rng.uniform_int(2, 4));
    const Matrix f = gen::orthogonal_equal_frame(rng, k + 1, k);
    const GeomMeanCheck eq = check_geom_mean(gram(f));
    EXPECT_TRUE(eq.means_equal && eq.eigenvalues_equal);
    Matrix bent = f;
    for (std::size_t i = 0; i < bent.rows(); ++i) bent(i, 1) *= 1.1;
    const GeomMeanCheck ne = check_geom_mean(gram(bent));
    EXPECT_TRUE(ne.holds && !ne.means_equal && !ne.eigenvalues_equal);
    EXPECT_TRUE(ne.equality_consistent());
  }
}

TEST(GeomMean, AsymmetricRejected) {
  EXPECT_THROW(check_geom_mean(Matrix::from_rows({{1, 2}, {0, 1}})), InputError);
}
