#pragma once

// Dense complex linear algebra, quadrature, finite differences and a
// fixed-step Runge-Kutta integrator shared by every other header.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace quantcurv {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
  using Error::Error;
};

/// Raised when a frame or grid is too poorly conditioned to orthonormalize.
class ConditioningError : public Error {
public:
  ConditioningError(const std::string& what, double smallest_eigenvalue)
      : Error(what), smallest_eigenvalue_(smallest_eigenvalue) {}
  double smallest_eigenvalue() const noexcept { return smallest_eigenvalue_; }

private:
  double smallest_eigenvalue_;
};

class DomainError : public Error {
public:
  using Error::Error;
};

class TruncationError : public Error {
public:
  using Error::Error;
};

class StepSizeError : public Error {
public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Matrix predicates and norms
// ---------------------------------------------------------------------------

inline constexpr double kAbsoluteFloor = 1e-14;

/// Hilbert-Schmidt norm sqrt(tr M*M).
inline double hs_norm(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    std::ostringstream msg;
    msg << "hs_norm: expected a square matrix, got " << m.rows() << "x" << m.cols();
    throw DimensionError(msg.str());
  }
  return m.norm();
}

inline double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const ComplexMatrix& m, double rel_tol = 1e-12) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(max_abs(m), kAbsoluteFloor);
  return max_abs(m - m.adjoint()) <= rel_tol * scale;
}

/// Orthogonal projector test: Hermitian and idempotent in the HS norm.
inline bool is_projector(const ComplexMatrix& m, double rel_tol = 1e-10) {
  if (!is_hermitian(m, rel_tol)) return false;
  const double scale = std::max(m.norm(), kAbsoluteFloor);
  return (m * m - m).norm() <= rel_tol * scale;
}

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b - b * a;
}

// ---------------------------------------------------------------------------
// Weighted frames
// ---------------------------------------------------------------------------

/// Nodes in a complex chart together with strictly positive weights.
struct QuadratureRule {
  std::vector<Complex> nodes;
  RealVector weights;

  std::size_t size() const noexcept { return nodes.size(); }
  double total_weight() const { return weights.sum(); }

  void validate() const {
    if (static_cast<Eigen::Index>(nodes.size()) != weights.size())
      throw DimensionError("QuadratureRule: node and weight counts differ");
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
      if (!(weights[i] > 0.0) || !std::isfinite(weights[i]))
        throw DomainError("QuadratureRule: weights must be finite and strictly positive");
    }
  }
};

/// Weighted Gram matrix  G = F* W F  of the columns of `frame`.
inline ComplexMatrix weighted_gram(const ComplexMatrix& frame, const RealVector& weights) {
  return frame.adjoint() * (weights.asDiagonal() * frame);
}

/// Weighted cross pairing  A* W B.
inline ComplexMatrix weighted_inner(const ComplexMatrix& a, const ComplexMatrix& b,
                                    const RealVector& weights) {
  return a.adjoint() * (weights.asDiagonal() * b);
}

/// Orthonormalizes the columns of `frame` with respect to the weighted
/// pairing by the inverse square root of the Gram matrix. The result spans
/// the same space and does not depend on the column order.
inline ComplexMatrix orthonormalize_frame(const ComplexMatrix& frame, const RealVector& weights,
                                          double max_condition = 1e8) {
  if (frame.rows() != weights.size())
    throw DimensionError("orthonormalize_frame: frame rows must match the weight count");
  if (frame.cols() == 0) return frame;
  const ComplexMatrix gram = weighted_gram(frame, weights);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(gram);
  const RealVector& lambda = eig.eigenvalues();
  const double lo = lambda.minCoeff();
  const double hi = lambda.maxCoeff();
  if (!(lo > 0.0) || hi / lo > max_condition) {
    std::ostringstream msg;
    msg << "frame is rank deficient or ill conditioned: smallest Gram eigenvalue " << lo
        << ", largest " << hi;
    throw ConditioningError(msg.str(), lo);
  }
  const ComplexMatrix inv_sqrt =
      eig.eigenvectors() * lambda.cwiseSqrt().cwiseInverse().asDiagonal() *
      eig.eigenvectors().adjoint();
  return frame * inv_sqrt;
}

/// Dense orthogonal projector onto span(frame) for the weighted pairing,
/// P = Q Q* W. For unit weights this is a Hermitian matrix; in general W P is.
inline ComplexMatrix projector_from_frame(const ComplexMatrix& frame, const RealVector& weights,
                                          double max_condition = 1e8) {
  const ComplexMatrix q = orthonormalize_frame(frame, weights, max_condition);
  return q * (q.adjoint() * weights.asDiagonal());
}

inline ComplexMatrix projector_from_frame(const ComplexMatrix& frame) {
  return projector_from_frame(frame, RealVector::Ones(frame.rows()));
}

// ---------------------------------------------------------------------------
// Finite differences
// ---------------------------------------------------------------------------

inline constexpr double kDefaultStep = 1e-3;

/// Symmetric difference quotient (c(t0+h) - c(t0-h)) / 2h.
template <class Curve>
auto central_difference(Curve&& curve, double t0, double h) {
  if (!(h > 0.0)) throw DomainError("central_difference: step must be positive");
  using Value = std::decay_t<decltype(curve(t0))>;
  Value plus = curve(t0 + h);
  Value minus = curve(t0 - h);
  return Value((plus - minus) / (2.0 * h));
}

/// One Richardson refinement of the central difference, (4 D_{h/2} - D_h) / 3.
template <class Curve>
auto richardson_difference(Curve&& curve, double t0, double h = kDefaultStep) {
  auto coarse = central_difference(curve, t0, h);
  auto fine = central_difference(curve, t0, 0.5 * h);
  using Value = decltype(coarse);
  return Value((4.0 * fine - coarse) / 3.0);
}

// ---------------------------------------------------------------------------
// Classical fourth-order Runge-Kutta
// ---------------------------------------------------------------------------

class Rk4Stepper {
public:
  static constexpr int order = 4;

  explicit Rk4Stepper(double dt) : dt_(dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("Rk4Stepper: dt must be positive");
  }

  double dt() const noexcept { return dt_; }

  /// Number of uniform steps used to cover [t0, t1]; never exceeds dt.
  int steps_for(double t0, double t1) const {
    return std::max(1, static_cast<int>(std::ceil(std::abs(t1 - t0) / dt_ - 1e-9)));
  }

  /// One step of size h for  y' = f(t, y).
  template <class State, class Rhs>
  static State step(const State& y, double t, double h, Rhs&& f) {
    const State k1 = f(t, y);
    const State k2 = f(t + 0.5 * h, State(y + (0.5 * h) * k1));
    const State k3 = f(t + 0.5 * h, State(y + (0.5 * h) * k2));
    const State k4 = f(t + h, State(y + h * k3));
    return State(y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
  }

  /// Integrates from t0 to t1 (either direction) with uniform steps.
  template <class State, class Rhs>
  State propagate(State y, double t0, double t1, Rhs&& f) const {
    if (t1 == t0) return y;
    const int n = steps_for(t0, t1);
    const double h = (t1 - t0) / n;
    for (int i = 0; i < n; ++i) y = step(y, t0 + i * h, h, f);
    return y;
  }

private:
  double dt_;
};

// ---------------------------------------------------------------------------
// Gauss-Legendre rule
// ---------------------------------------------------------------------------

struct GaussRule {
  RealVector nodes;
  RealVector weights;
};

/// n-point Gauss-Legendre rule on [a, b] (Newton iteration on P_n).
inline GaussRule gauss_legendre(int n, double a = -1.0, double b = 1.0) {
  if (n < 1) throw DomainError("gauss_legendre: need at least one node");
  GaussRule rule{RealVector(n), RealVector(n)};
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0, p1 = x;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute the derivative at the converged root
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = mid - half * x;
    rule.nodes[n - 1 - i] = mid + half * x;
    rule.weights[i] = half * w;
    rule.weights[n - 1 - i] = half * w;
  }
  return rule;
}

// ---------------------------------------------------------------------------
// Deterministic random numbers
// ---------------------------------------------------------------------------

/// Uniform double in [lo, hi) from the top 53 bits of a 64-bit engine draw,
/// so sampled values do not depend on the standard library's distributions.
template <class Engine>
double uniform(Engine& engine, double lo, double hi) {
  const std::uint64_t bits = static_cast<std::uint64_t>(engine()) >> 11;
  return lo + (hi - lo) * (static_cast<double>(bits) * 0x1.0p-53);
}

template <class Engine>
double standard_normal(Engine& engine) {
  // Box-Muller; the first uniform is kept away from zero.
  const double u1 = uniform(engine, 0x1.0p-53, 1.0);
  const double u2 = uniform(engine, 0.0, 1.0);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace quantcurv
