#include "quantcurv/bargmann.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace quantcurv;

namespace {

BiPolynomial z(int n, int j) { return BiPolynomial::coordinate(n, j, false); }
BiPolynomial zb(int n, int j) { return BiPolynomial::coordinate(n, j, true); }

double deviation(const FockOperator& op, Complex target) {
  ComplexMatrix d = op.matrix;
  d.topRows(d.cols()).diagonal().array() -= target;
  return d.norm();
}

/// Degree of the single monomial in a basis column, or -1.
int degree_of(const FockTruncation& t, int i) { return total_degree(t.alpha(i)); }

}  // namespace

TEST(FockTruncation, Basics) {
  const FockTruncation t(2, 4.0, 12);
  EXPECT_EQ(t.dim(), 91);  // C(14, 2)
  EXPECT_EQ(t.safe_degree(), 8);
  EXPECT_EQ(t.dim_up_to(8), 45);
  EXPECT_THROW(FockTruncation(1, 4.0, 5), DomainError);
  EXPECT_THROW(FockTruncation(0, 4.0, 12), DomainError);
  EXPECT_THROW(FockTruncation(1, 0.0, 12), DomainError);
  EXPECT_NEAR(t.norm({2, 1}), std::sqrt(64.0 / 2.0), 1e-12);
}

TEST(Project, Examples) {
  for (double N : {1.0, 4.0, 10.0}) {
    const FockTruncation t(1, N, 12);
    const HoloPolynomial a = project(zb(1, 0) * z(1, 0), t);
    EXPECT_NEAR(std::abs(a.coefficient({0}) - 1.0 / N), 0.0, 1e-15);
    const HoloPolynomial b = project(zb(1, 0) * zb(1, 0) * z(1, 0) * z(1, 0), t);
    EXPECT_NEAR(std::abs(b.coefficient({0}) - 2.0 / (N * N)), 0.0, 1e-15);
    const HoloPolynomial c = project(z(1, 0) * z(1, 0) * z(1, 0), t);
    EXPECT_EQ(c.coefficients().size(), 1u);
    EXPECT_EQ(c.coefficient({3}), Complex(1.0));
    EXPECT_EQ(project(zb(1, 0), t).coefficients().size(), 0u);
  }
}

TEST(Project, ProjectorIdentitiesAgainstGaussianMoments) {
  for (int n : {1, 2}) {
    for (double N : {1.0, 4.0, 10.0}) {
      for (int s = 0; s < n; ++s) {
        MultiIndex one(n, 0);
        one[s] = 1;
        EXPECT_LE(oracle::projector_identity_error(n, N, 10, one), 1e-12) << n << " " << N;
        for (int r = 0; r < n; ++r) {
          MultiIndex two = one;
          two[r] += 1;
          EXPECT_LE(oracle::projector_identity_error(n, N, 10, two), 1e-12) << n << " " << N;
        }
      }
      EXPECT_LE(projector_identity_defect(FockTruncation(n, N, 12)), 1e-12);
    }
  }
}

TEST(Project, HigherConjugateDegreeIteratesTheRule) {
  const FockTruncation t(1, 3.0, 12);
  const BiPolynomial p = BiPolynomial::monomial({5}, {3});
  const HoloPolynomial q = project(p, t);
  EXPECT_NEAR(std::abs(q.coefficient({2}) - 60.0 / 27.0), 0.0, 1e-14);
  const auto m = oracle::moment_projection({5}, {3}, 3.0);
  EXPECT_NEAR(m.at({2}), 60.0 / 27.0, 1e-12);
}

TEST(LieDerivative, Examples) {
  const FockTruncation t(1, 4.0, 12);
  const double N = t.level();
  HoloPolynomial f(1, 12);
  f.add({3}, Complex(1.0, 0.5));
  f.add({1}, -2.0);
  EXPECT_EQ(lie_derivative(BiPolynomial(1), f, t).terms().size(), 0u);
  // H = z^2: pi L f = -2 i N z^2 f
  const HoloPolynomial a = project(lie_derivative(z(1, 0) * z(1, 0), f, t), t);
  EXPECT_LT(std::abs(a.coefficient({5}) - Complex(0, -2 * N) * Complex(1.0, 0.5)), 1e-12);
  EXPECT_LT(std::abs(a.coefficient({3}) - Complex(0, -2 * N) * -2.0), 1e-12);
  // H = zbar^2: pi L f = -(2i/N) f''
  const HoloPolynomial b = project(lie_derivative(zb(1, 0) * zb(1, 0), f, t), t);
  EXPECT_LT(std::abs(b.coefficient({1}) - Complex(0, -2 / N) * 6.0 * Complex(1.0, 0.5)), 1e-12);
  EXPECT_EQ(b.coefficients().size(), 1u);
  HoloPolynomial high(1, 12);
  high.add({11}, 1.0);
  EXPECT_THROW(lie_derivative(z(1, 0) * z(1, 0), high, t), TruncationError);
}

TEST(LieMatrix, ZeroAndDegreeBands) {
  const FockTruncation t(2, 4.0, 12);
  EXPECT_EQ(lie_matrix(BiPolynomial(2), t).matrix.norm(), 0.0);
  const FockOperator up = lie_matrix(z(2, 0) * z(2, 1), t);
  const FockOperator down = lie_matrix(zb(2, 0) * zb(2, 1), t);
  for (int i = 0; i < t.dim(); ++i) {
    for (int j = 0; j < t.dim(); ++j) {
      if (std::abs(up.matrix(i, j)) > 0.0) EXPECT_EQ(degree_of(t, i), degree_of(t, j) + 2);
      if (std::abs(down.matrix(i, j)) > 0.0) EXPECT_EQ(degree_of(t, i), degree_of(t, j) - 2);
    }
  }
  EXPECT_GT(up.matrix.norm(), 0.0);
  EXPECT_GT(down.matrix.norm(), 0.0);
}

TEST(Curvature, MonomialCasesOneVariable) {
  const FockTruncation t(1, 4.0, 12);
  const BiPolynomial z2 = z(1, 0) * z(1, 0);
  const BiPolynomial zb2 = zb(1, 0) * zb(1, 0);
  EXPECT_LE(deviation(curvature_operator(z2, z2, t), 0.0), 1e-10);
  EXPECT_LE(deviation(curvature_operator(zb2, zb2, t), 0.0), 1e-10);
  EXPECT_LE(deviation(curvature_operator(z2, zb2, t), 8.0), 1e-10);
}

TEST(Curvature, MonomialCasesTwoVariables) {
  const int n = 2;
  const FockTruncation t(n, 4.0, 12);
  const std::vector<std::pair<int, int>> idx{{0, 0}, {0, 1}, {1, 1}};
  for (auto [m, l] : idx) {
    for (auto [r, s] : idx) {
      const double k = (m == r && l == s) + (m == s && l == r);
      EXPECT_LE(deviation(curvature_operator(z(n, m) * z(n, l), z(n, r) * z(n, s), t), 0.0), 1e-10);
      EXPECT_LE(deviation(curvature_operator(zb(n, m) * zb(n, l), zb(n, r) * zb(n, s), t), 0.0), 1e-10);
      EXPECT_LE(deviation(curvature_operator(z(n, m) * z(n, l), zb(n, r) * zb(n, s), t), 4.0 * k), 1e-10)
          << m << l << r << s;
    }
  }
}

TEST(Curvature, PlusMinusBasis) {
  for (int n : {1, 2}) {
    const FockTruncation t(n, 4.0, 12);
    const auto b = p_plus_minus_basis(n);
    for (std::size_t i = 0; i < b.indices.size(); ++i) {
      for (std::size_t j = 0; j < b.indices.size(); ++j) {
        const auto [m, l] = b.indices[i];
        const auto [r, s] = b.indices[j];
        const double k = (m == r && l == s) + (m == s && l == r);
        EXPECT_LE(deviation(curvature_operator(b.plus[i], b.minus[j], t), Complex(0, -8 * k)), 1e-10);
        EXPECT_LE(deviation(curvature_operator(b.plus[i], b.plus[j], t), 0.0), 1e-10);
        EXPECT_LE(deviation(curvature_operator(b.minus[i], b.minus[j], t), 0.0), 1e-10);
      }
    }
  }
}

TEST(Curvature, SwapAntisymmetry) {
  const FockTruncation t(2, 3.0, 10);
  std::mt19937_64 rng(21);
  auto random_quadratic = [&]() {
    BiPolynomial h(2);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        h += Complex(standard_normal(rng), standard_normal(rng)) * (z(2, a) * z(2, b));
        h += Complex(standard_normal(rng), standard_normal(rng)) * (z(2, a) * zb(2, b));
        h += Complex(standard_normal(rng), standard_normal(rng)) * (zb(2, a) * zb(2, b));
      }
    return h;
  };
  const BiPolynomial h1 = random_quadratic(), h2 = random_quadratic();
  const ComplexMatrix c12 = curvature_operator(h1, h2, t).matrix;
  const ComplexMatrix c21 = curvature_operator(h2, h1, t).matrix;
  EXPECT_LE((c12 + c21).norm(), 1e-10 * c12.norm());
}

TEST(Curvature, TruncationGuard) {
  const FockTruncation t(1, 4.0, 8);
  EXPECT_THROW(curvature_operator(z(1, 0) * z(1, 0), zb(1, 0) * zb(1, 0), t, 5), TruncationError);
  EXPECT_NO_THROW(curvature_operator(z(1, 0) * z(1, 0), zb(1, 0) * zb(1, 0), t, 4));
}

TEST(ScalarCurvature, Examples) {
  const FockTruncation t(1, 4.0, 12);
  const auto b = p_plus_minus_basis(1);
  const ScalarCurvature same = verify_scalar_curvature(b.plus[0], b.plus[0], t);
  EXPECT_LE(std::abs(same.scalar), 1e-10);
  EXPECT_LE(same.deviation, 1e-10);
  const ScalarCurvature pm = verify_scalar_curvature(b.plus[0], b.minus[0], t);
  EXPECT_LE(std::abs(pm.scalar - Complex(0, -16)), 1e-10);
  EXPECT_NEAR(omega_generators(b.plus[0], b.minus[0]), 32.0, 1e-12);
  EXPECT_LE(std::abs(linear_symbol_constant() - Complex(0, -0.125)), 1e-12);
  const QuadraticHamiltonian k(SpElement(standard_sigma(1)));
  EXPECT_THROW(verify_scalar_curvature(k, b.plus[0], t), DomainError);
}

TEST(ScalarCurvature, RandomPairsMatchHigherCutoff) {
  std::mt19937_64 rng(22);
  const auto b = p_plus_minus_basis(1);
  const FockTruncation t(1, 4.0, 12);
  const FockTruncation wide(1, 4.0, 16);
  for (int trial = 0; trial < 5; ++trial) {
    const auto q1 = b.plus[0].scaled(uniform(rng, -1, 1)) + b.minus[0].scaled(uniform(rng, -1, 1));
    const auto q2 = b.plus[0].scaled(uniform(rng, -1, 1)) + b.minus[0].scaled(uniform(rng, -1, 1));
    const ScalarCurvature s = verify_scalar_curvature(q1, q2, t);
    const FockOperator c = curvature_operator(q1, q2, wide);
    const Complex brute = c.square_block().trace() / double(c.matrix.cols());
    EXPECT_LE(s.deviation, 1e-8);
    EXPECT_LE(std::abs(s.scalar - brute), 1e-9 * (1.0 + std::abs(brute)));
    EXPECT_LE(std::abs(s.scalar / omega_generators(q1, q2) - Complex(0, -0.5)), 1e-9);
  }
}
