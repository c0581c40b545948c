#include "quantcurv/numerics.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace quantcurv;

namespace {

ComplexMatrix random_matrix(std::mt19937_64& rng, int r, int c) {
  ComplexMatrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = Complex(standard_normal(rng), standard_normal(rng));
  return m;
}

}  // namespace

TEST(HsNorm, Examples) {
  EXPECT_NEAR(hs_norm(ComplexMatrix::Identity(3, 3)), std::sqrt(3.0), 1e-15);
  EXPECT_EQ(hs_norm(ComplexMatrix::Zero(4, 4)), 0.0);
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  EXPECT_NEAR(hs_norm(m), 1.0, 1e-15);
}

TEST(HsNorm, RejectsNonSquare) { EXPECT_THROW(hs_norm(ComplexMatrix::Zero(2, 3)), DimensionError); }

TEST(Flags, HermitianAndProjector) {
  std::mt19937_64 rng(1);
  const ComplexMatrix a = random_matrix(rng, 4, 4);
  EXPECT_TRUE(is_hermitian(a + a.adjoint()));
  EXPECT_FALSE(is_hermitian(a));
  EXPECT_TRUE(is_projector(projector_from_frame(random_matrix(rng, 4, 2))));
  EXPECT_FALSE(is_projector(a));
}

TEST(ProjectorFromFrame, UnitVector) {
  ComplexMatrix e1 = ComplexMatrix::Zero(2, 1);
  e1(0, 0) = 1.0;
  ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
  expected(0, 0) = 1.0;
  EXPECT_LT((projector_from_frame(e1) - expected).norm(), 1e-15);
}

TEST(ProjectorFromFrame, FullBasisIsIdentity) {
  std::mt19937_64 rng(2);
  const ComplexMatrix q = Eigen::HouseholderQR<ComplexMatrix>(random_matrix(rng, 3, 3)).householderQ();
  EXPECT_LT((projector_from_frame(q) - ComplexMatrix::Identity(3, 3)).norm(), 1e-12);
}

TEST(ProjectorFromFrame, RandomPairInDimensionFour) {
  std::mt19937_64 rng(3);
  const ComplexMatrix p = projector_from_frame(random_matrix(rng, 4, 2));
  EXPECT_LE((p * p - p).norm(), 1e-10 * p.norm());
  EXPECT_NEAR(p.trace().real(), 2.0, 1e-12);
  EXPECT_NEAR(p.trace().imag(), 0.0, 1e-12);
  EXPECT_TRUE(is_hermitian(p));
}

TEST(ProjectorFromFrame, WeightedPairing) {
  std::mt19937_64 rng(4);
  RealVector w(6);
  for (int i = 0; i < 6; ++i) w[i] = uniform(rng, 0.5, 2.0);
  const ComplexMatrix f = random_matrix(rng, 6, 3);
  const ComplexMatrix p = projector_from_frame(f, w);
  EXPECT_LT((p * p - p).norm(), 1e-12);
  EXPECT_LT((p * f - f).norm(), 1e-12 * f.norm());
  // self-adjoint for <x, y> = x* W y
  const ComplexMatrix wp = w.asDiagonal() * p;
  EXPECT_LT((wp - wp.adjoint()).norm(), 1e-12);
}

TEST(ProjectorFromFrame, RankDeficientReportsEigenvalue) {
  std::mt19937_64 rng(5);
  ComplexMatrix f = random_matrix(rng, 4, 2);
  f.col(1) = 2.0 * f.col(0);
  try {
    projector_from_frame(f);
    FAIL() << "expected ConditioningError";
  } catch (const ConditioningError& e) {
    EXPECT_LT(std::abs(e.smallest_eigenvalue()), 1e-10);
  }
}

TEST(CentralDifference, Examples) {
  auto linear = [](double t) { return ComplexMatrix(t * ComplexMatrix::Identity(2, 2)); };
  EXPECT_LT((central_difference(linear, 0.0, 0.1) - ComplexMatrix::Identity(2, 2)).norm(), 1e-15);
  auto even = [](double t) { return ComplexMatrix(t * t * ComplexMatrix::Identity(2, 2)); };
  EXPECT_LT(central_difference(even, 0.0, 0.37).norm(), 1e-15);
  auto e = [](double t) { return ComplexMatrix(ComplexMatrix::Constant(1, 1, std::exp(t))); };
  EXPECT_NEAR(central_difference(e, 0.0, 1e-3)(0, 0).real(), 1.0, 1e-6);
  EXPECT_THROW(central_difference(e, 0.0, 0.0), DomainError);
}

TEST(CentralDifference, SecondOrder) {
  auto curve = [](double t) {
    ComplexMatrix m(2, 2);
    m << std::exp(t), std::sin(2 * t), Complex(0, std::cos(t)), t * t * t;
    return m;
  };
  ComplexMatrix exact(2, 2);
  const double t0 = 0.3;
  exact << std::exp(t0), 2 * std::cos(2 * t0), Complex(0, -std::sin(t0)), 3 * t0 * t0;
  const double e1 = (central_difference(curve, t0, 1e-2) - exact).norm();
  const double e2 = (central_difference(curve, t0, 5e-3) - exact).norm();
  EXPECT_GE(e1 / e2, 3.5);
  EXPECT_LT((richardson_difference(curve, t0, 1e-2) - exact).norm(), 1e-9);
}

TEST(Rk4, Order) { EXPECT_EQ(Rk4Stepper::order, 4); }

TEST(Rk4, StepsNeverExceedDt) {
  const Rk4Stepper s(0.3);
  EXPECT_EQ(s.steps_for(0.0, 0.9), 3);
  EXPECT_EQ(s.steps_for(0.0, 1.0), 4);
  EXPECT_THROW(Rk4Stepper(0.0), DomainError);
}

TEST(Rk4, LinearGrowthWithinBound) {
  const double dt = 1e-2;
  const Rk4Stepper s(dt);
  for (Complex c : {Complex(4, 0), Complex(-4, 0), Complex(0, 4), Complex(0, -4), Complex(3, 2), Complex(-2.5, 3)}) {
    using V = Eigen::Matrix<Complex, 1, 1>;
    V y = V::Constant(1.0);
    y = s.propagate(y, 0.0, 1.0, [c](double, const V& x) { return V(c * x); });
    EXPECT_LE(std::abs(y(0) - std::exp(c)) / std::abs(std::exp(c)), 10 * std::pow(dt, 4)) << c;
  }
}

TEST(Rk4, LinearGrowthAtModulusFiveFollowsLeadingErrorTerm) {
  // leading global relative error of RK4 on y' = c y over [0,1] is |c|^5 dt^4 / 120
  const double dt = 1e-2;
  for (double c : {5.0, -5.0}) {
    using V = Eigen::Matrix<double, 1, 1>;
    V y = V::Constant(1.0);
    y = Rk4Stepper(dt).propagate(y, 0.0, 1.0, [c](double, const V& x) { return V(c * x); });
    const double rel = std::abs(y(0) - std::exp(c)) / std::exp(c);
    EXPECT_NEAR(rel / (std::pow(5.0, 5) * std::pow(dt, 4) / 120.0), 1.0, 0.05);
  }
}

TEST(Rk4, UnitaryFlowPreservesNorm) {
  std::mt19937_64 rng(6);
  ComplexMatrix h = random_matrix(rng, 5, 5);
  h = (0.5 * (h + h.adjoint())).eval();
  h /= h.norm();
  const double dt = 1e-2;
  ComplexMatrix y = ComplexMatrix::Identity(5, 5);
  y = Rk4Stepper(dt).propagate(y, 0.0, 2.0, [&](double, const ComplexMatrix& x) { return ComplexMatrix(kI * h * x); });
  EXPECT_LE((y.adjoint() * y - ComplexMatrix::Identity(5, 5)).norm(), 10 * std::pow(dt, 4) * 2.0);
}

TEST(GaussLegendre, ExactForPolynomials) {
  const GaussRule g = gauss_legendre(6, 0.0, 2.0);
  for (int k = 0; k <= 11; ++k) {
    double s = 0.0;
    for (int i = 0; i < 6; ++i) s += g.weights[i] * std::pow(g.nodes[i], k);
    EXPECT_NEAR(s, std::pow(2.0, k + 1) / (k + 1), 1e-12 * std::pow(2.0, k + 1)) << k;
  }
  EXPECT_THROW(gauss_legendre(0), DomainError);
}

TEST(QuadratureRule, RejectsNonPositiveWeights) {
  QuadratureRule r;
  r.nodes = {Complex(0), Complex(1)};
  r.weights = RealVector::Ones(2);
  EXPECT_NO_THROW(r.validate());
  r.weights[1] = 0.0;
  EXPECT_THROW(r.validate(), DomainError);
  r.weights = RealVector::Ones(3);
  EXPECT_THROW(r.validate(), DimensionError);
}

TEST(Random, UniformIsDeterministicAndInRange) {
  std::mt19937_64 a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    const double x = uniform(a, -1.0, 3.0);
    EXPECT_EQ(x, uniform(b, -1.0, 3.0));
    EXPECT_GE(x, -1.0);
    EXPECT_LT(x, 3.0);
  }
}
