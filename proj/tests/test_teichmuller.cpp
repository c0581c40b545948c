#include "quantcurv/teichmuller.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace quantcurv;

namespace {

Complex random_complex(std::mt19937_64& rng) { return {standard_normal(rng), standard_normal(rng)}; }

}  // namespace

TEST(SlicePoint, HyperbolicPointIsRound) {
  for (double s : {0.5, 1.0, 2.0}) {
    const SlicePoint p = SlicePoint::hyperbolic(s);
    EXPECT_NEAR(p.rho0, s, 1e-15);
    EXPECT_LT((metric_matrix(p) - s * Mat2::Identity()).norm(), 1e-14);
    EXPECT_LT((h_matrix(p) + Mat2::Identity()).norm(), 1e-14);
  }
}

TEST(SlicePoint, RejectsInadmissibleData) {
  SlicePoint p;
  p.sigma = 1.0;
  p.rho0 = 2.0;
  EXPECT_THROW(p.validate(), DomainError);
  p.rho0 = 1.0;
  p.f0 = -1.0;
  EXPECT_THROW(p.validate(), DomainError);
  EXPECT_THROW(SlicePoint::admissible(0.0, 1.0, 0.0), DomainError);
}

TEST(SlicePoint, HIsSymplecticAndFactorsMetric) {
  std::mt19937_64 rng(31);
  const Mat2 j0 = slice_j0();
  for (int t = 0; t < 100; ++t) {
    const SlicePoint p = random_slice_point(rng);
    const Mat2 h = h_matrix(p);
    EXPECT_NEAR(h.determinant(), 1.0, 1e-12);
    EXPECT_LT((h.transpose() * j0 * h - j0).norm(), 1e-12);
    const Mat2 g = metric_matrix(p);
    EXPECT_LT((p.sigma * j0.inverse() * h * j0 * h.inverse() - g).norm(), 1e-10 * g.norm());
    EXPECT_NEAR(g.determinant(), p.sigma * p.sigma, 1e-10 * p.sigma * p.sigma);
  }
}

TEST(SliceVariation, PreservesArea) {
  std::mt19937_64 rng(32);
  for (int t = 0; t < 20; ++t) {
    const SlicePoint p = random_slice_point(rng);
    const SliceVariation v = slice_variation(p, random_complex(rng));
    // d det g = tr(adj(g) u)
    const Mat2 g = metric_matrix(p);
    Mat2 adj;
    adj << g(1, 1), -g(0, 1), -g(1, 0), g(0, 0);
    EXPECT_NEAR((adj * v.u).trace(), 0.0, 1e-10 * g.norm() * v.u.norm());
  }
}

TEST(Pairing, TraceMatchesClosedForm) {
  std::mt19937_64 rng(33);
  for (int t = 0; t < 200; ++t) {
    const SlicePoint p = random_slice_point(rng);
    const Complex v1 = random_complex(rng), v2 = random_complex(rng);
    const double tr = pairing_trace(p, slice_variation(p, v1), slice_variation(p, v2));
    const double closed = pairing_closed_form(p, v1, v2);
    const double scale = 8.0 / (p.sigma * p.rho0 * p.f0 * p.e0) * std::abs(v1) * std::abs(v2);
    EXPECT_LE(std::abs(tr - closed) / scale, 1e-10);
  }
}

TEST(Pairing, AntisymmetricAndPhaseInvariant) {
  std::mt19937_64 rng(34);
  const SlicePoint p = random_slice_point(rng);
  const Complex v1 = random_complex(rng), v2 = random_complex(rng);
  EXPECT_NEAR(pairing_closed_form(p, v1, v2), -pairing_closed_form(p, v2, v1), 1e-14);
  EXPECT_EQ(pairing_closed_form(p, v1, v1), 0.0);
  const Complex e = std::polar(1.0, 0.7);
  EXPECT_NEAR(pairing_closed_form(p, e * v1, e * v2), pairing_closed_form(p, v1, v2), 1e-12);
}

TEST(Pairing, ReducesToWeilPeterssonAtZeroDifferential) {
  std::mt19937_64 rng(35);
  for (int t = 0; t < 50; ++t) {
    const double sigma = uniform(rng, 0.5, 3.0);
    const double f0 = uniform(rng, 0.5, 3.0);
    const double e0 = uniform(rng, 0.5, 2.0);
    const SlicePoint p = SlicePoint::admissible(sigma, f0, 0.0, e0);
    const Complex phi1 = random_complex(rng), phi2 = random_complex(rng);
    const double lhs = pairing_trace(p, slice_variation(p, phi1), slice_variation(p, phi2));
    const double rhs = wp_integrand(sigma, phi1, phi2);
    EXPECT_LE(std::abs(lhs - rhs), 1e-12 * 8.0 / (sigma * sigma) * std::abs(phi1) * std::abs(phi2));
  }
}

TEST(WpIntegrand, Examples) {
  EXPECT_NEAR(wp_integrand(2.0, 1.0, kI), 2.0, 1e-15);
  EXPECT_EQ(wp_integrand(1.0, 1.0, 1.0), 0.0);
  EXPECT_THROW(wp_integrand(0.0, 1.0, 1.0), DomainError);
}
