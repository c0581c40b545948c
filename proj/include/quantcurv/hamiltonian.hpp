#pragma once

// Hamiltonians on S^2 given by quadratic polynomials on R^3, their vector
// fields, and the lift of their flows to the prequantum circle bundle S^3.
//
// Sign convention: iota_xi omega = -dH with omega = 2 dx dy / (1+r^2)^2 in
// the affine chart, which gives xi = 2 grad P x X in R^3.

#include "quantcurv/sphere_grid.hpp"

namespace quantcurv {

inline Mat3 cross_matrix(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return m;
}

/// P(X) = 1/2 X^T Q X + l.X + c restricted to the unit sphere.
class SphereHamiltonian {
public:
  SphereHamiltonian(const Mat3& q, const Vec3& l, double c = 0.0) : q_(0.5 * (q + q.transpose())), l_(l), c_(c) {}

  static SphereHamiltonian constant(double c) { return {Mat3::Zero(), Vec3::Zero(), c}; }
  /// Rotation generator rate * <axis, X>.
  static SphereHamiltonian rotation(const Vec3& axis, double rate = 0.5) {
    return {Mat3::Zero(), rate * axis, 0.0};
  }
  /// x_i x_j (i != j) or x_i^2.
  static SphereHamiltonian product(int i, int j) {
    Mat3 q = Mat3::Zero();
    q(i, j) += 1.0;
    q(j, i) += 1.0;
    return {q, Vec3::Zero(), 0.0};
  }

  const Mat3& hessian() const noexcept { return q_; }
  const Vec3& linear() const noexcept { return l_; }
  double offset() const noexcept { return c_; }

  double value(const Vec3& x) const { return 0.5 * x.dot(q_ * x) + l_.dot(x) + c_; }
  Vec3 gradient(const Vec3& x) const { return q_ * x + l_; }

  /// Infinitesimal isometry: the traceless part of Q vanishes.
  bool is_rotation(double tol = 1e-14) const {
    const Mat3 traceless = q_ - (q_.trace() / 3.0) * Mat3::Identity();
    return traceless.cwiseAbs().maxCoeff() <= tol;
  }

  Vec3 vector_field(const Vec3& x) const { return 2.0 * gradient(x).cross(x); }

  /// Ambient derivative of the vector field: D_v xi = 2 (Q v) x X + 2 grad P x v.
  Mat3 vector_field_jacobian(const Vec3& x) const {
    return -2.0 * cross_matrix(x) * q_ + 2.0 * cross_matrix(gradient(x));
  }

  /// H at the affine coordinate z.
  double chart_value(Complex z) const { return value(chart_to_sphere(z)); }

  /// (dH/dz, dH/dzbar) at the affine coordinate z.
  std::pair<Complex, Complex> chart_derivatives(Complex z) const {
    const Complex zb = std::conj(z);
    const Complex d = 1.0 + z * zb;
    const Complex dx1 = (1.0 - zb * zb) / (d * d);
    const Complex dx2 = Complex(0.0, -1.0) * (1.0 + zb * zb) / (d * d);
    const Complex dx3 = 2.0 * zb / (d * d);
    const Vec3 g = gradient(chart_to_sphere(z));
    const Complex hz = g.x() * dx1 + g.y() * dx2 + g.z() * dx3;
    return {hz, std::conj(hz)};
  }

  /// Chart components (xi^x, xi^y) of the Hamiltonian vector field.
  std::pair<double, double> chart_vector_field(Complex z) const {
    const auto [hz, hzb] = chart_derivatives(z);
    const double hx = 2.0 * hz.real();
    const double hy = -2.0 * hz.imag();
    const double rho = 2.0 / std::pow(1.0 + std::norm(z), 2);
    return {-hy / rho, hx / rho};
  }

  SphereHamiltonian operator+(const SphereHamiltonian& o) const {
    return {Mat3(q_ + o.q_), Vec3(l_ + o.l_), c_ + o.c_};
  }
  SphereHamiltonian scaled(double a) const { return {Mat3(a * q_), Vec3(a * l_), a * c_}; }

private:
  Mat3 q_;
  Vec3 l_;
  double c_;
};

/// Horizontal vector at p in S^3 projecting to the tangent vector xi at hopf(p).
inline C2 horizontal_lift(const C2& p, const Vec3& xi) {
  const C2 hb(-std::conj(p[1]), std::conj(p[0]));
  const C2 ihb = kI * hb;
  const Vec3 e1 = hopf_differential(p, hb);
  const Vec3 e2 = hopf_differential(p, ihb);
  Eigen::Matrix<double, 3, 2> e;
  e << e1, e2;
  const Eigen::Vector2d c = (e.transpose() * e).ldlt().solve(e.transpose() * xi);
  return c[0] * hb + c[1] * ihb;
}

/// eta = horizontal lift of xi_H plus H times the fiber generator i p.
inline C2 lifted_field(const SphereHamiltonian& h, const C2& p) {
  const Vec3 x = hopf(p);
  return horizontal_lift(p, h.vector_field(x)) + h.value(x) * (kI * p);
}

/// Flow of the lifted field for time t, RK4 with uniform steps no larger
/// than dt. The point is renormalized to S^3 after every step; a drift
/// above `max_drift` before renormalization means dt is too large.
inline C2 flow_point(const SphereHamiltonian& h, C2 p, double t, double dt, double max_drift = 1e-6) {
  if (t == 0.0) return p;
  const Rk4Stepper stepper(dt);
  const int n = stepper.steps_for(0.0, t);
  const double step = t / n;
  auto rhs = [&h](double, const C2& y) { return lifted_field(h, y); };
  for (int i = 0; i < n; ++i) {
    p = Rk4Stepper::step(p, i * step, step, rhs);
    const double norm = p.norm();
    if (std::abs(norm - 1.0) > max_drift) {
      std::ostringstream msg;
      msg << "flow_point: |p| drifted by " << std::abs(norm - 1.0) << " in one step of size " << step;
      throw StepSizeError(msg.str());
    }
    p /= norm;
  }
  return p;
}

/// Flows every row of `lift` (an M x 2 array of points of S^3).
inline ComplexMatrix flow_points(const SphereHamiltonian& h, const ComplexMatrix& lift, double t, double dt) {
  ComplexMatrix out(lift.rows(), 2);
  for (Eigen::Index i = 0; i < lift.rows(); ++i)
    out.row(i) = flow_point(h, C2(lift(i, 0), lift(i, 1)), t, dt).transpose();
  return out;
}

/// Flow of xi on S^2 together with its differential, integrated as one
/// system (X, Phi) with Phi' = Dxi(X) Phi.
struct FlowWithDifferential {
  Vec3 point;
  Mat3 differential;
};

inline FlowWithDifferential flow_with_differential(const SphereHamiltonian& h, const Vec3& x0, double t, double dt) {
  using State = Eigen::Matrix<double, 3, 4>;
  State y;
  y.col(0) = x0;
  y.rightCols<3>() = Mat3::Identity();
  auto rhs = [&h](double, const State& s) {
    State d;
    const Vec3 x = s.col(0);
    d.col(0) = h.vector_field(x);
    d.rightCols<3>() = h.vector_field_jacobian(x) * s.rightCols<3>();
    return d;
  };
  y = Rk4Stepper(dt).propagate(y, 0.0, t, rhs);
  return {y.col(0), y.rightCols<3>()};
}

}  // namespace quantcurv
