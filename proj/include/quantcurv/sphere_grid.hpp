#pragma once

// Quadrature on CP^1 = S^2 with the Fubini-Study area form of total mass pi.
// Radial nodes are Gauss-Legendre in t = r^2/(1+r^2), angular nodes are
// uniform, and each node is lifted to S^3 in C^2 by p = (sqrt(1-t), sqrt(t) e^{i theta}).

#include "quantcurv/numerics.hpp"

#include <Eigen/Geometry>

namespace quantcurv {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using C2 = Eigen::Vector2cd;

/// Hopf map S^3 -> S^2: (2 Re(conj(a) b), 2 Im(conj(a) b), |b|^2 - |a|^2).
inline Vec3 hopf(const C2& p) {
  const Complex c = std::conj(p[0]) * p[1];
  return {2.0 * c.real(), 2.0 * c.imag(), std::norm(p[1]) - std::norm(p[0])};
}

/// Differential of the Hopf map at p applied to v.
inline Vec3 hopf_differential(const C2& p, const C2& v) {
  const Complex c = std::conj(v[0]) * p[1] + std::conj(p[0]) * v[1];
  return {2.0 * c.real(), 2.0 * c.imag(),
          2.0 * (std::conj(p[1]) * v[1]).real() - 2.0 * (std::conj(p[0]) * v[0]).real()};
}

/// Point of S^2 for the affine coordinate z = w1/w0.
inline Vec3 chart_to_sphere(Complex z) {
  const double r2 = std::norm(z);
  return Vec3(2.0 * z.real(), 2.0 * z.imag(), r2 - 1.0) / (1.0 + r2);
}

struct GridPolicy {
  static int radial(int level) { return 2 * level + 16; }
  static int angular(int level) { return 4 * level + 8; }
};

class SphereGrid {
public:
  SphereGrid(int n_radial, int n_angular) : n_radial_(n_radial), n_angular_(n_angular) {
    if (n_radial < 1 || n_angular < 1) throw DomainError("SphereGrid: node counts must be positive");
    const GaussRule g = gauss_legendre(n_radial, 0.0, 1.0);
    const int m = n_radial * n_angular;
    lift_.resize(m, 2);
    points_.resize(3, m);
    rule_.nodes.resize(m);
    rule_.weights.resize(m);
    const double dtheta = 2.0 * std::numbers::pi / n_angular;
    int idx = 0;
    for (int i = 0; i < n_radial; ++i) {
      const double t = g.nodes[i];
      for (int j = 0; j < n_angular; ++j, ++idx) {
        const double theta = j * dtheta;
        const Complex a(std::sqrt(1.0 - t), 0.0);
        const Complex b = std::sqrt(t) * std::polar(1.0, theta);
        lift_(idx, 0) = a;
        lift_(idx, 1) = b;
        points_.col(idx) = hopf(C2(a, b));
        rule_.nodes[idx] = b / a;
        rule_.weights[idx] = 0.5 * g.weights[i] * dtheta;
      }
    }
    rule_.validate();
  }

  /// Grid sized for sections of level N.
  static SphereGrid for_level(int level) {
    if (level < 1) throw DomainError("SphereGrid: level must be positive");
    return SphereGrid(GridPolicy::radial(level), GridPolicy::angular(level));
  }

  /// Fubini-Study area in this normalization.
  static constexpr double exact_area() { return std::numbers::pi; }

  bool resolves(int level) const {
    return n_radial_ >= GridPolicy::radial(level) && n_angular_ >= GridPolicy::angular(level);
  }

  int n_radial() const noexcept { return n_radial_; }
  int n_angular() const noexcept { return n_angular_; }
  Eigen::Index size() const noexcept { return rule_.weights.size(); }

  const QuadratureRule& rule() const noexcept { return rule_; }
  const RealVector& weights() const noexcept { return rule_.weights; }
  /// Columns are points of S^2 in R^3.
  const RealMatrix& points() const noexcept { return points_; }
  Vec3 point(Eigen::Index i) const { return points_.col(i); }
  /// Rows are the chosen lifts (w0, w1) in S^3.
  const ComplexMatrix& lift() const noexcept { return lift_; }
  C2 lift(Eigen::Index i) const { return lift_.row(i).transpose(); }

  double integrate(const RealVector& f) const { return rule_.weights.dot(f); }
  double average(const RealVector& f) const { return integrate(f) / rule_.total_weight(); }

private:
  int n_radial_;
  int n_angular_;
  QuadratureRule rule_;
  RealMatrix points_;
  ComplexMatrix lift_;
};

}  // namespace quantcurv
