#pragma once

// Reference computations used only by tests, built from independent
// formulas rather than the library code paths they check.

#include "quantcurv/numerics.hpp"
#include "quantcurv/polynomial.hpp"

#include <map>
#include <vector>

namespace oracle {

using quantcurv::Complex;
using quantcurv::MultiIndex;

/// 2 pi int_0^inf r^{2a+1} exp(-N r^2) dr by Gauss-Legendre on [0, R].
inline double radial_moment(int a, double level) {
  static std::map<std::pair<int, double>, double> cache;
  if (const auto it = cache.find({a, level}); it != cache.end()) return it->second;
  const double r_max = std::sqrt((60.0 + 4.0 * a) / level);
  const quantcurv::GaussRule g = quantcurv::gauss_legendre(240, 0.0, r_max);
  double s = 0.0;
  for (Eigen::Index i = 0; i < g.nodes.size(); ++i) {
    const double r = g.nodes[i];
    s += g.weights[i] * std::pow(r, 2 * a + 1) * std::exp(-level * r * r);
  }
  return cache[{a, level}] = 2.0 * std::numbers::pi * s;
}

/// Orthogonal projection of z^alpha zbar^beta onto holomorphic polynomials in
/// L^2(exp(-N|z|^2)), from numerically integrated Gaussian moments. The
/// angular integral forces gamma_j = alpha_j - beta_j in each variable.
inline std::map<MultiIndex, double> moment_projection(const MultiIndex& alpha, const MultiIndex& beta, double level) {
  std::map<MultiIndex, double> out;
  MultiIndex gamma(alpha.size());
  double c = 1.0;
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    gamma[j] = alpha[j] - beta[j];
    if (gamma[j] < 0) return out;
    c *= radial_moment(alpha[j], level) / radial_moment(gamma[j], level);
  }
  out[gamma] = c;
  return out;
}

/// d^beta z^alpha as a single coefficient and exponent.
inline std::map<MultiIndex, double> derivative(const MultiIndex& alpha, const MultiIndex& beta) {
  std::map<MultiIndex, double> out;
  MultiIndex gamma(alpha.size());
  double c = 1.0;
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    gamma[j] = alpha[j] - beta[j];
    if (gamma[j] < 0) return out;
    for (int r = 0; r < beta[j]; ++r) c *= alpha[j] - r;
  }
  out[gamma] = c;
  return out;
}

/// Largest relative error of pi(zbar^beta z^alpha) = N^{-|beta|} d^beta z^alpha
/// (moment side vs derivative side) over all alpha with |alpha| <= max_degree
/// and the given beta.
inline double projector_identity_error(int n, double level, int max_degree, const MultiIndex& beta) {
  double worst = 0.0;
  for (const MultiIndex& a : quantcurv::monomials_up_to(n, max_degree)) {
    const auto lhs = moment_projection(a, beta, level);
    const auto rhs = derivative(a, beta);
    const double scale = std::pow(level, -quantcurv::total_degree(beta));
    for (const auto& [g, c] : rhs) {
      const auto it = lhs.find(g);
      const double l = it == lhs.end() ? 0.0 : it->second;
      worst = std::max(worst, std::abs(l - c * scale) / std::max(std::abs(c * scale), 1e-300));
    }
    for (const auto& [g, c] : lhs)
      if (!rhs.count(g)) worst = std::max(worst, std::abs(c));
  }
  return worst;
}

/// pi k!(N-k)!/(N+1)! by a running product.
inline double beta_norm(int level, int k) {
  double v = std::numbers::pi / (level + 1);
  // k!(N-k)!/N! = 1/C(N,k)
  double binom = 1.0;
  for (int j = 1; j <= k; ++j) binom = binom * (level - k + j) / j;
  return v / binom;
}

}  // namespace oracle
