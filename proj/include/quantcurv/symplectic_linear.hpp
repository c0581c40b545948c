#pragma once

// Linear symplectic algebra on (R^{2n}, omega): sp(n,R), the Cartan split,
// quadratic Hamiltonians, tangent vectors to compatible complex structures.
//
// Coordinates are v = (x_1..x_n, y_1..y_n), z_j = x_j + i y_j, and
// omega(u, v) = u^T sigma^T v with sigma = [[0,-I],[I,0]].

#include "quantcurv/numerics.hpp"

#include <random>
#include <utility>
#include <vector>

namespace quantcurv {

/// The block matrix [[0,-I],[I,0]].
inline RealMatrix standard_sigma(int n) {
  if (n < 1) throw DomainError("standard_sigma: n must be positive");
  RealMatrix s = RealMatrix::Zero(2 * n, 2 * n);
  s.block(0, n, n, n) = -RealMatrix::Identity(n, n);
  s.block(n, 0, n, n) = RealMatrix::Identity(n, n);
  return s;
}

inline double omega(const RealVector& u, const RealVector& v) {
  const int n = static_cast<int>(u.size() / 2);
  return u.dot(standard_sigma(n).transpose() * v);
}

namespace detail {
inline double rel_scale(const RealMatrix& m) {
  return std::max(m.size() ? m.cwiseAbs().maxCoeff() : 0.0, 1.0);
}
inline int half_dim(const RealMatrix& m, const char* who) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0 || m.rows() == 0) {
    std::ostringstream msg;
    msg << who << ": expected a square matrix of even size, got " << m.rows() << "x" << m.cols();
    throw DimensionError(msg.str());
  }
  return static_cast<int>(m.rows() / 2);
}
}  // namespace detail

/// An element of sp(n,R): X^T sigma + sigma X = 0.
class SpElement {
public:
  SpElement() = default;

  explicit SpElement(RealMatrix x, double tol = 1e-12) : x_(std::move(x)) {
    n_ = detail::half_dim(x_, "SpElement");
    const RealMatrix s = standard_sigma(n_);
    const double defect = (x_.transpose() * s + s * x_).cwiseAbs().maxCoeff();
    if (defect > tol * detail::rel_scale(x_)) {
      std::ostringstream msg;
      msg << "SpElement: X^T sigma + sigma X has max entry " << defect;
      throw DomainError(msg.str());
    }
  }

  static SpElement zero(int n) { return SpElement(RealMatrix::Zero(2 * n, 2 * n)); }

  int n() const noexcept { return n_; }
  const RealMatrix& matrix() const noexcept { return x_; }

  bool is_k(double tol = 1e-14) const {
    return (x_ + x_.transpose()).cwiseAbs().maxCoeff() <= tol * detail::rel_scale(x_);
  }
  bool is_p(double tol = 1e-14) const {
    return (x_ - x_.transpose()).cwiseAbs().maxCoeff() <= tol * detail::rel_scale(x_);
  }

private:
  int n_ = 0;
  RealMatrix x_;
};

/// Cartan automorphism X -> -X^T.
inline RealMatrix cartan_theta(const RealMatrix& x) { return -x.transpose(); }

struct CartanParts {
  SpElement k_part;
  SpElement p_part;
};

/// X = (X - X^T)/2 + (X + X^T)/2.
inline CartanParts cartan_decompose(const SpElement& x) {
  const RealMatrix& m = x.matrix();
  return {SpElement(RealMatrix(0.5 * (m - m.transpose()))),
          SpElement(RealMatrix(0.5 * (m + m.transpose())))};
}

/// H(v) = 1/2 v^T sigma^T X v.
class QuadraticHamiltonian {
public:
  QuadraticHamiltonian() = default;
  explicit QuadraticHamiltonian(SpElement generator) : gen_(std::move(generator)) {}

  /// Builds H(v) = 1/2 v^T S v from a symmetric form S; the generator is sigma S.
  static QuadraticHamiltonian from_form(const RealMatrix& s) {
    const int n = detail::half_dim(s, "QuadraticHamiltonian::from_form");
    if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-12 * detail::rel_scale(s))
      throw DomainError("QuadraticHamiltonian::from_form: form is not symmetric");
    return QuadraticHamiltonian(SpElement(RealMatrix(standard_sigma(n) * s)));
  }

  int n() const noexcept { return gen_.n(); }
  const SpElement& generator() const noexcept { return gen_; }

  /// Symmetric Hessian S = sigma^T X.
  RealMatrix form() const { return standard_sigma(n()).transpose() * gen_.matrix(); }

  double operator()(const RealVector& v) const {
    check_point(v);
    return 0.5 * v.dot(form() * v);
  }

  RealVector gradient(const RealVector& v) const {
    check_point(v);
    return form() * v;
  }

  QuadraticHamiltonian scaled(double a) const {
    return QuadraticHamiltonian(SpElement(RealMatrix(a * gen_.matrix())));
  }

  QuadraticHamiltonian operator+(const QuadraticHamiltonian& o) const {
    if (o.n() != n()) throw DimensionError("QuadraticHamiltonian: dimension mismatch");
    return QuadraticHamiltonian(SpElement(RealMatrix(gen_.matrix() + o.gen_.matrix())));
  }

private:
  void check_point(const RealVector& v) const {
    if (v.size() != 2 * n()) throw DimensionError("QuadraticHamiltonian: point has wrong size");
  }
  SpElement gen_;
};

/// {H1,H2}(v) = 1/2 omega(v, [X2,X1] v).
inline QuadraticHamiltonian poisson_bracket(const QuadraticHamiltonian& h1,
                                            const QuadraticHamiltonian& h2) {
  if (h1.n() != h2.n()) throw DimensionError("poisson_bracket: dimension mismatch");
  const RealMatrix& x1 = h1.generator().matrix();
  const RealMatrix& x2 = h2.generator().matrix();
  return QuadraticHamiltonian(SpElement(RealMatrix(x2 * x1 - x1 * x2), 1e-10));
}

/// xi_H = sum dH/dy_j d/dx_j - dH/dx_j d/dy_j, which equals -X v.
inline RealVector hamiltonian_vector_field(const QuadraticHamiltonian& h, const RealVector& v) {
  const RealVector g = h.gradient(v);
  const int n = h.n();
  RealVector xi(2 * n);
  xi.head(n) = g.tail(n);
  xi.tail(n) = -g.head(n);
  return xi;
}

/// A compatible linear complex structure: J^2 = -I, J^T sigma J = sigma,
/// omega(v, Jv) > 0.
class LinearComplexStructure {
public:
  explicit LinearComplexStructure(RealMatrix j, double tol = 1e-10, std::uint64_t seed = 7)
      : j_(std::move(j)) {
    n_ = detail::half_dim(j_, "LinearComplexStructure");
    const RealMatrix id = RealMatrix::Identity(2 * n_, 2 * n_);
    const RealMatrix s = standard_sigma(n_);
    const double scale = detail::rel_scale(j_);
    if ((j_ * j_ + id).cwiseAbs().maxCoeff() > tol * scale * scale)
      throw DomainError("LinearComplexStructure: J^2 != -I");
    if ((j_.transpose() * s * j_ - s).cwiseAbs().maxCoeff() > tol * scale * scale)
      throw DomainError("LinearComplexStructure: J does not preserve omega");
    std::mt19937_64 rng(seed);
    for (int trial = 0; trial < 20; ++trial) {
      RealVector v(2 * n_);
      for (int i = 0; i < v.size(); ++i) v[i] = standard_normal(rng);
      if (!(v.dot(s.transpose() * j_ * v) > tol))
        throw DomainError("LinearComplexStructure: omega(v, Jv) is not positive");
    }
  }

  /// J0 = sigma, the structure whose holomorphic coordinates are z = x + iy.
  static LinearComplexStructure standard(int n) { return LinearComplexStructure(standard_sigma(n)); }

  int n() const noexcept { return n_; }
  const RealMatrix& matrix() const noexcept { return j_; }

private:
  int n_ = 0;
  RealMatrix j_;
};

/// A in T_J: JA + AJ = 0 and omega(A., J.) + omega(J., A.) = 0.
class TangentVariation {
public:
  TangentVariation(RealMatrix a, const LinearComplexStructure& base, double tol = 1e-12)
      : a_(std::move(a)), base_(base.matrix()) {
    if (a_.rows() != base_.rows() || a_.cols() != base_.cols())
      throw DimensionError("TangentVariation: size does not match base structure");
    const int n = static_cast<int>(a_.rows() / 2);
    const RealMatrix s = standard_sigma(n);
    const double scale = detail::rel_scale(a_);
    if ((base_ * a_ + a_ * base_).cwiseAbs().maxCoeff() > tol * scale)
      throw DomainError("TangentVariation: JA + AJ != 0");
    // omega(Au, Jv) + omega(Ju, Av) = u^T (A^T s^T J + J^T s^T A) v
    const RealMatrix c = a_.transpose() * s.transpose() * base_ + base_.transpose() * s.transpose() * a_;
    if (c.cwiseAbs().maxCoeff() > tol * scale)
      throw DomainError("TangentVariation: omega(A.,J.) + omega(J.,A.) != 0");
  }

  /// Tangent of t -> exp(tX) J exp(-tX) at t = 0, i.e. [X, J].
  static TangentVariation from_generator(const SpElement& x, const LinearComplexStructure& j) {
    return TangentVariation(RealMatrix(x.matrix() * j.matrix() - j.matrix() * x.matrix()), j, 1e-10);
  }

  const RealMatrix& matrix() const noexcept { return a_; }
  const RealMatrix& base() const noexcept { return base_; }

private:
  RealMatrix a_;
  RealMatrix base_;
};

namespace detail {
inline void require_same_base(const TangentVariation& a, const TangentVariation& b,
                              const RealMatrix& j, const char* who) {
  const double tol = 1e-12 * rel_scale(j);
  if (a.base().rows() != j.rows() || b.base().rows() != j.rows() ||
      (a.base() - j).cwiseAbs().maxCoeff() > tol || (b.base() - j).cwiseAbs().maxCoeff() > tol)
    throw DomainError(std::string(who) + ": tangent vectors are based at a different structure");
}
}  // namespace detail

/// Omega(A,B) = tr(A J0 B).
inline double omega_p(const TangentVariation& a, const TangentVariation& b) {
  detail::require_same_base(a, b, a.base(), "omega_p");
  return (a.matrix() * a.base() * b.matrix()).trace();
}

/// chi_{A,B} = tr(A J B).
inline double chi_symbol(const TangentVariation& a, const LinearComplexStructure& j,
                         const TangentVariation& b) {
  detail::require_same_base(a, b, j.matrix(), "chi_symbol");
  return (a.matrix() * j.matrix() * b.matrix()).trace();
}

struct PPlusMinusBasis {
  std::vector<QuadraticHamiltonian> plus;
  std::vector<QuadraticHamiltonian> minus;
  std::vector<std::pair<int, int>> indices;
};

/// H+_{m,l} = z_m z_l + conj(z_m z_l),  H-_{m,l} = i (z_m z_l - conj(z_m z_l)),
/// for 0 <= m <= l < n.
inline PPlusMinusBasis p_plus_minus_basis(int n) {
  if (n < 1) throw DomainError("p_plus_minus_basis: n must be positive");
  PPlusMinusBasis out;
  for (int m = 0; m < n; ++m) {
    for (int l = m; l < n; ++l) {
      // H+ = 2(x_m x_l - y_m y_l),  H- = -2(x_m y_l + y_m x_l)
      RealMatrix sp = RealMatrix::Zero(2 * n, 2 * n);
      RealMatrix sm = RealMatrix::Zero(2 * n, 2 * n);
      sp(m, l) += 2.0;
      sp(l, m) += 2.0;
      sp(n + m, n + l) -= 2.0;
      sp(n + l, n + m) -= 2.0;
      sm(m, n + l) -= 2.0;
      sm(n + l, m) -= 2.0;
      sm(n + m, l) -= 2.0;
      sm(l, n + m) -= 2.0;
      out.plus.push_back(QuadraticHamiltonian::from_form(sp));
      out.minus.push_back(QuadraticHamiltonian::from_form(sm));
      out.indices.emplace_back(m, l);
    }
  }
  return out;
}

struct QuadraticParts {
  ComplexMatrix hermitian_part;  // A' + iB', anti-Hermitian
  ComplexMatrix symmetric_part;  // A'' - iB'', complex symmetric
};

/// Splits X = [[A,B],[C,-A^T]] so that
/// H(v) = 1/4 Re(i z^T (A'+iB') conj(z) + i z^T (A''-iB'') z)
/// with A' = A - A^T, B' = B - C, A'' = A + A^T, B'' = B + C.
inline QuadraticParts decompose_quadratic(const QuadraticHamiltonian& h) {
  const int n = h.n();
  const RealMatrix& x = h.generator().matrix();
  const RealMatrix a = x.block(0, 0, n, n);
  const RealMatrix b = x.block(0, n, n, n);
  const RealMatrix c = x.block(n, 0, n, n);
  const double scale = detail::rel_scale(x);
  if ((b - b.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale ||
      (c - c.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale ||
      (x.block(n, n, n, n) + a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw DomainError("decompose_quadratic: generator is not of the form [[A,B],[C,-A^T]]");
  QuadraticParts parts;
  parts.hermitian_part = (a - a.transpose()).cast<Complex>() + kI * (b - c).cast<Complex>();
  parts.symmetric_part = (a + a.transpose()).cast<Complex>() - kI * (b + c).cast<Complex>();
  return parts;
}

/// Evaluates the right-hand side of the decomposition at v.
inline double evaluate_decomposition(const QuadraticParts& parts, const RealVector& v) {
  const int n = static_cast<int>(parts.hermitian_part.rows());
  ComplexVector z(n);
  for (int j = 0; j < n; ++j) z[j] = Complex(v[j], v[n + j]);
  const Complex a = kI * (z.transpose() * parts.hermitian_part * z.conjugate())(0, 0);
  const Complex b = kI * (z.transpose() * parts.symmetric_part * z)(0, 0);
  return 0.25 * (a + b).real();
}

}  // namespace quantcurv
