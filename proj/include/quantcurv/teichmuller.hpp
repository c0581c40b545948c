#pragma once

// Pointwise slice data over Teichmuller space: the metric
// g0 = f0 [[Phi+conj(Phi)+rho E, i(Phi-conj(Phi))], [i(Phi-conj(Phi)), -Phi-conj(Phi)+rho E]],
// the Sp(1,R) matrix h with g0 = sigma J0^{-1} h J0 h^{-1}, and the trace
// pairing of metric variations.

#include "quantcurv/numerics.hpp"

#include <Eigen/Dense>

namespace quantcurv {

using Mat2 = Eigen::Matrix2d;

inline Mat2 slice_j0() {
  Mat2 j;
  j << 0.0, -1.0, 1.0, 0.0;
  return j;
}

inline Mat2 slice_z() {
  Mat2 z;
  z << 1.0, 1.0, -1.0, 1.0;
  return z / std::sqrt(2.0);
}

struct SlicePoint {
  double sigma = 1.0;
  double rho0 = 1.0;
  double e0 = 1.0;
  double f0 = 1.0;
  Complex phi0{0.0, 0.0};

  double rho_e() const { return rho0 * e0; }

  /// f0^2 (rho0^2 E0^2 - 4|Phi0|^2) - sigma^2, which vanishes on the slice.
  double admissibility_defect() const {
    return f0 * f0 * (rho_e() * rho_e() - 4.0 * std::norm(phi0)) - sigma * sigma;
  }

  void validate(double tol = 1e-10) const {
    if (!(sigma > 0.0) || !(rho0 > 0.0) || !(e0 > 0.0) || !(f0 > 0.0))
      throw DomainError("SlicePoint: sigma, rho0, E0 and f0 must be positive");
    if (std::abs(admissibility_defect()) > tol * sigma * sigma) {
      std::ostringstream msg;
      msg << "SlicePoint: area constraint f0^2(rho0^2 E0^2 - 4|Phi0|^2) = sigma^2 violated by "
          << admissibility_defect();
      throw DomainError(msg.str());
    }
  }

  /// Point on the slice with the given sigma, f0, Phi0 and E0; rho0 solves the area constraint.
  static SlicePoint admissible(double sigma, double f0, Complex phi0, double e0 = 1.0) {
    SlicePoint p;
    p.sigma = sigma;
    p.f0 = f0;
    p.phi0 = phi0;
    p.e0 = e0;
    p.rho0 = std::sqrt(sigma * sigma / (f0 * f0) + 4.0 * std::norm(phi0)) / e0;
    p.validate();
    return p;
  }

  /// The hyperbolic point f0 = E0 = 1, rho0 = sigma, Phi0 = 0.
  static SlicePoint hyperbolic(double sigma) { return admissible(sigma, 1.0, 0.0, 1.0); }
};

/// Random admissible point: sigma, f0 in [0.5, 3], |Phi0| <= 1, E0 in [0.5, 2].
template <class Engine>
SlicePoint random_slice_point(Engine& rng) {
  const double sigma = uniform(rng, 0.5, 3.0);
  const double f0 = uniform(rng, 0.5, 3.0);
  const double r = std::sqrt(uniform(rng, 0.0, 1.0));
  const double th = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  const double e0 = uniform(rng, 0.5, 2.0);
  return SlicePoint::admissible(sigma, f0, std::polar(r, th), e0);
}

inline Mat2 metric_matrix(const SlicePoint& p) {
  p.validate();
  const double a = p.phi0.real();
  const double b = p.phi0.imag();
  Mat2 g;
  g << 2.0 * a + p.rho_e(), -2.0 * b, -2.0 * b, -2.0 * a + p.rho_e();
  return p.f0 * g;
}

inline Mat2 h_matrix(const SlicePoint& p) {
  p.validate();
  const double a = p.phi0.real();
  const double b = p.phi0.imag();
  const double s = p.sigma;
  const double f = p.f0;
  const double re = p.rho_e();
  Mat2 h;
  h << -s + f * (2.0 * a - re), -2.0 * b * f, -2.0 * b * f, -s - f * (2.0 * a + re);
  return h / std::sqrt(2.0 * s * (s + f * re));
}

/// Metric variation u = dg/dt built from v = d(f Phi)/dt, with
/// d(f rho E)/dt = 4 Re(conj(f Phi) v)/(f rho E) keeping the area fixed.
struct SliceVariation {
  Complex v;
  Mat2 u;
};

inline SliceVariation slice_variation(const SlicePoint& p, Complex v) {
  const double m = 4.0 * (std::conj(p.f0 * p.phi0) * v).real() / (p.f0 * p.rho_e());
  Mat2 u;
  u << 2.0 * v.real() + m, -2.0 * v.imag(), -2.0 * v.imag(), -2.0 * v.real() + m;
  return {v, u};
}

/// -(1/sigma^2) tr(h^{-1} J0 u1 h Z h^{-1} J0 u2 h Z^{-1}).
inline double pairing_trace(const SlicePoint& p, const SliceVariation& u1, const SliceVariation& u2) {
  const Mat2 h = h_matrix(p);
  const Mat2 hi = h.inverse();
  const Mat2 j0 = slice_j0();
  const Mat2 z = slice_z();
  const Mat2 zi = z.inverse();
  return -(hi * j0 * u1.u * h * z * hi * j0 * u2.u * h * zi).trace() / (p.sigma * p.sigma);
}

/// -8/(sigma rho0 f0 E0) Im(v1 conj(v2)).
inline double pairing_closed_form(const SlicePoint& p, Complex v1, Complex v2) {
  p.validate();
  return -8.0 / (p.sigma * p.rho0 * p.f0 * p.e0) * (v1 * std::conj(v2)).imag();
}

/// -(8/sigma^2) Im(phi1 conj(phi2)).
inline double wp_integrand(double sigma, Complex phi1, Complex phi2) {
  if (!(sigma > 0.0)) throw DomainError("wp_integrand: sigma must be positive");
  return -8.0 / (sigma * sigma) * (phi1 * std::conj(phi2)).imag();
}

}  // namespace quantcurv
