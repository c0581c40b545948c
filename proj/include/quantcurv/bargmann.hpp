#pragma once

// Truncated Bargmann spaces: sections f(z) exp(-N|z|^2/2) with f a
// polynomial of degree <= D, the projector pi, Lie derivatives of quadratic
// Hamiltonians and the exact curvature operators.

#include "quantcurv/polynomial.hpp"
#include "quantcurv/symplectic_linear.hpp"

#include <map>

namespace quantcurv {

class FockTruncation {
public:
  FockTruncation(int n, double level, int max_degree) : n_(n), level_(level), max_degree_(max_degree) {
    if (n < 1) throw DomainError("FockTruncation: n must be positive");
    if (!(level > 0.0)) throw DomainError("FockTruncation: level N must be positive");
    if (max_degree < 6) throw DomainError("FockTruncation: degree cutoff D must be at least 6");
    basis_ = monomials_up_to(n, max_degree);
    for (std::size_t i = 0; i < basis_.size(); ++i) index_.emplace(basis_[i], static_cast<int>(i));
  }

  int n() const noexcept { return n_; }
  double level() const noexcept { return level_; }
  int max_degree() const noexcept { return max_degree_; }
  int safe_degree() const noexcept { return max_degree_ - 4; }

  int dim() const noexcept { return static_cast<int>(basis_.size()); }
  /// Number of monomials of degree <= d.
  int dim_up_to(int d) const {
    int c = 0;
    for (const auto& a : basis_) c += total_degree(a) <= d;
    return c;
  }
  int safe_dim() const { return dim_up_to(safe_degree()); }

  const std::vector<MultiIndex>& basis() const noexcept { return basis_; }
  const MultiIndex& alpha(int i) const { return basis_.at(i); }
  int index_of(const MultiIndex& a) const {
    auto it = index_.find(a);
    if (it == index_.end()) throw TruncationError("FockTruncation: monomial beyond the cutoff");
    return it->second;
  }

  /// e_alpha = norm(alpha) z^alpha is orthonormal.
  double norm(const MultiIndex& a) const {
    return std::sqrt(std::pow(level_, total_degree(a)) / multi_factorial(a));
  }

  BiPolynomial basis_vector(int i) const {
    const MultiIndex& a = basis_.at(i);
    return BiPolynomial::monomial(a, MultiIndex(n_, 0), norm(a));
  }

private:
  int n_;
  double level_;
  int max_degree_;
  std::vector<MultiIndex> basis_;
  std::map<MultiIndex, int> index_;
};

/// Matrix in the orthonormal basis e_alpha. Rows run over every monomial of
/// degree <= D; columns over those of degree <= column_degree.
struct FockOperator {
  int column_degree = 0;
  ComplexMatrix matrix;

  /// Square block acting on degree <= column_degree.
  ComplexMatrix square_block() const { return matrix.topRows(matrix.cols()); }
};

/// H(v) = 1/2 v^T S v written in z, zbar.
inline BiPolynomial to_bipolynomial(const QuadraticHamiltonian& h) {
  const int n = h.n();
  const RealMatrix s = h.form();
  std::vector<BiPolynomial> coord;
  coord.reserve(2 * n);
  for (int j = 0; j < n; ++j)
    coord.push_back(0.5 * (BiPolynomial::coordinate(n, j, false) + BiPolynomial::coordinate(n, j, true)));
  for (int j = 0; j < n; ++j)
    coord.push_back(Complex(0.0, -0.5) * (BiPolynomial::coordinate(n, j, false) -
                                          BiPolynomial::coordinate(n, j, true)));
  BiPolynomial out(n);
  for (int a = 0; a < 2 * n; ++a)
    for (int b = 0; b < 2 * n; ++b)
      if (s(a, b) != 0.0) out += Complex(0.5 * s(a, b)) * (coord[a] * coord[b]);
  // drop roundoff residue from the x, y substitution
  BiPolynomial clean(n);
  const double tol = 1e-15 * std::max(out.max_abs_coefficient(), 1.0);
  for (const auto& [k, c] : out.terms())
    clean.add_term(k.first, k.second,
                   Complex(std::abs(c.real()) > tol ? c.real() : 0.0, std::abs(c.imag()) > tol ? c.imag() : 0.0));
  return clean;
}

/// z^alpha zbar^beta -> N^{-|beta|} d^beta(z^alpha).
inline HoloPolynomial project(const BiPolynomial& p, const FockTruncation& trunc) {
  if (p.n() != trunc.n()) throw DimensionError("project: variable count mismatch");
  HoloPolynomial out(trunc.n(), trunc.max_degree());
  MultiIndex g(trunc.n());
  for (const auto& [k, c] : p.terms()) {
    const MultiIndex& a = k.first;
    const MultiIndex& b = k.second;
    double coef = 1.0;
    bool zero = false;
    for (int j = 0; j < trunc.n(); ++j) {
      if (b[j] > a[j]) {
        zero = true;
        break;
      }
      g[j] = a[j] - b[j];
      for (int r = 0; r < b[j]; ++r) coef *= static_cast<double>(a[j] - r);
    }
    if (zero) continue;
    coef *= std::pow(trunc.level(), -total_degree(b));
    out.add(g, c * coef);
  }
  return out;
}

/// Largest relative error of pi(zbar_s f) = (1/N) d_s f and
/// pi(zbar_s zbar_r f) = (1/N^2) d_s d_r f over monomials f of degree <= D-2.
inline double projector_identity_defect(const FockTruncation& trunc) {
  const int n = trunc.n();
  const double N = trunc.level();
  double worst = 0.0;
  auto compare = [&](const BiPolynomial& lhs_in, const BiPolynomial& rhs) {
    const BiPolynomial diff = project(lhs_in, trunc).as_bipolynomial() - rhs;
    const double scale = std::max(rhs.max_abs_coefficient(), kAbsoluteFloor);
    worst = std::max(worst, diff.max_abs_coefficient() / scale);
  };
  for (const MultiIndex& a : trunc.basis()) {
    if (total_degree(a) > trunc.max_degree() - 2) continue;
    const BiPolynomial f = BiPolynomial::monomial(a, MultiIndex(n, 0));
    for (int s = 0; s < n; ++s) {
      const BiPolynomial zs = BiPolynomial::coordinate(n, s, true);
      compare(zs * f, Complex(1.0 / N) * f.derivative(s, false));
      for (int r = 0; r < n; ++r) {
        const BiPolynomial zr = BiPolynomial::coordinate(n, r, true);
        compare(zs * zr * f, Complex(1.0 / (N * N)) * f.derivative(r, false).derivative(s, false));
      }
    }
  }
  return worst;
}

/// Prefactor of exp(-N|z|^2/2) after applying the Lie derivative along
/// xi_H = 2i sum (dH/dz_j d/dzbar_j - dH/dzbar_j d/dz_j) to P exp(-N|z|^2/2).
inline BiPolynomial apply_lie(const BiPolynomial& h, const BiPolynomial& p, double level) {
  if (h.n() != p.n()) throw DimensionError("lie_derivative: variable count mismatch");
  const int n = h.n();
  BiPolynomial out(n);
  for (int j = 0; j < n; ++j) {
    const BiPolynomial hz = h.derivative(j, false);
    const BiPolynomial hzb = h.derivative(j, true);
    BiPolynomial dzb = p.derivative(j, true) - Complex(0.5 * level) * (BiPolynomial::coordinate(n, j, false) * p);
    BiPolynomial dz = p.derivative(j, false) - Complex(0.5 * level) * (BiPolynomial::coordinate(n, j, true) * p);
    out += hz * dzb;
    out -= hzb * dz;
  }
  return out *= Complex(0.0, 2.0);
}

inline BiPolynomial lie_derivative(const BiPolynomial& h, const HoloPolynomial& f,
                                   const FockTruncation& trunc) {
  for (const auto& [a, c] : f.coefficients()) {
    if (total_degree(a) > trunc.max_degree() - 2) {
      std::ostringstream msg;
      msg << "lie_derivative: input degree " << total_degree(a) << " exceeds D-2 = "
          << trunc.max_degree() - 2;
      throw TruncationError(msg.str());
    }
  }
  return apply_lie(h, f.as_bipolynomial(), trunc.level());
}

inline BiPolynomial lie_derivative(const QuadraticHamiltonian& h, const HoloPolynomial& f,
                                   const FockTruncation& trunc) {
  return lie_derivative(to_bipolynomial(h), f, trunc);
}

namespace detail {
inline void write_column(ComplexMatrix& m, int col, const HoloPolynomial& f, const FockTruncation& trunc) {
  for (const auto& [a, c] : f.coefficients()) m(trunc.index_of(a), col) += c / trunc.norm(a);
}

inline HoloPolynomial project_dropping(const BiPolynomial& p, const FockTruncation& trunc) {
  BiPolynomial kept(p.n());
  for (const auto& [k, c] : p.terms())
    if (total_degree(k.first) - total_degree(k.second) <= trunc.max_degree())
      kept.add_term(k.first, k.second, c);
  return project(kept, trunc);
}
}  // namespace detail

/// Matrix of pi L_H on the whole truncated basis. Columns of degree <= D-2
/// are exact; components that would land beyond degree D are discarded.
inline FockOperator lie_matrix(const BiPolynomial& h, const FockTruncation& trunc) {
  FockOperator op{trunc.max_degree(), ComplexMatrix::Zero(trunc.dim(), trunc.dim())};
  for (int i = 0; i < trunc.dim(); ++i) {
    const BiPolynomial l = apply_lie(h, trunc.basis_vector(i), trunc.level());
    detail::write_column(op.matrix, i, detail::project_dropping(l, trunc), trunc);
  }
  return op;
}

inline FockOperator lie_matrix(const QuadraticHamiltonian& h, const FockTruncation& trunc) {
  return lie_matrix(to_bipolynomial(h), trunc);
}

/// Curv_{H1,H2} = pi[L2,L1]pi - [pi L2 pi, pi L1 pi] on degree <= D-4,
/// evaluated by exact polynomial algebra.
inline FockOperator curvature_operator(const BiPolynomial& h1, const BiPolynomial& h2,
                                       const FockTruncation& trunc, int column_degree = -1) {
  if (column_degree < 0) column_degree = trunc.safe_degree();
  if (column_degree > trunc.safe_degree()) {
    std::ostringstream msg;
    msg << "curvature_operator: column degree " << column_degree << " exceeds D-4 = "
        << trunc.safe_degree();
    throw TruncationError(msg.str());
  }
  const double N = trunc.level();
  const int cols = trunc.dim_up_to(column_degree);
  FockOperator op{column_degree, ComplexMatrix::Zero(trunc.dim(), cols)};
  for (int i = 0; i < cols; ++i) {
    const BiPolynomial f = trunc.basis_vector(i);
    const BiPolynomial l1 = apply_lie(h1, f, N);
    const BiPolynomial l2 = apply_lie(h2, f, N);
    BiPolynomial full = apply_lie(h2, l1, N) - apply_lie(h1, l2, N);
    const BiPolynomial p1 = project(l1, trunc).as_bipolynomial();
    const BiPolynomial p2 = project(l2, trunc).as_bipolynomial();
    full -= apply_lie(h2, p1, N);
    full += apply_lie(h1, p2, N);
    detail::write_column(op.matrix, i, project(full, trunc), trunc);
  }
  return op;
}

inline FockOperator curvature_operator(const QuadraticHamiltonian& h1, const QuadraticHamiltonian& h2,
                                       const FockTruncation& trunc) {
  return curvature_operator(to_bipolynomial(h1), to_bipolynomial(h2), trunc);
}

struct ScalarCurvature {
  Complex scalar;
  double deviation;
};

/// Best scalar c with Curv ~ c Id on the safe subspace, and the normalized
/// HS distance ||Curv - c Id|| / ||Id||.
inline ScalarCurvature scalar_part(const FockOperator& curv) {
  const Eigen::Index d = curv.matrix.cols();
  const Complex c = curv.square_block().trace() / static_cast<double>(d);
  ComplexMatrix diff = curv.matrix;
  diff.topRows(d).diagonal().array() -= c;
  return {c, diff.norm() / std::sqrt(static_cast<double>(d))};
}

inline ScalarCurvature verify_scalar_curvature(const QuadraticHamiltonian& q1, const QuadraticHamiltonian& q2,
                                               const FockTruncation& trunc) {
  if (!q1.generator().is_p(1e-12) || !q2.generator().is_p(1e-12))
    throw DomainError("verify_scalar_curvature: both generators must lie in p");
  return scalar_part(curvature_operator(q1, q2, trunc));
}

/// Omega(X1, X2) = tr(X1 J0 X2) for generators in p, which are tangent
/// vectors at J0.
inline double omega_generators(const QuadraticHamiltonian& q1, const QuadraticHamiltonian& q2) {
  const auto j0 = LinearComplexStructure::standard(q1.n());
  return omega_p(TangentVariation(q1.generator().matrix(), j0, 1e-10),
                 TangentVariation(q2.generator().matrix(), j0, 1e-10));
}

/// kappa with Curv_{H1,H2} = kappa tr(A J0 B) Id, where A = [X1, J0] and
/// B = [X2, J0] are the tangents of the flows at J0 (measured for n = 1).
inline Complex linear_symbol_constant(double level = 4.0, int max_degree = 12) {
  const FockTruncation trunc(1, level, max_degree);
  const auto basis = p_plus_minus_basis(1);
  const auto j0 = LinearComplexStructure::standard(1);
  const ScalarCurvature s = verify_scalar_curvature(basis.plus[0], basis.minus[0], trunc);
  const auto a = TangentVariation::from_generator(basis.plus[0].generator(), j0);
  const auto b = TangentVariation::from_generator(basis.minus[0].generator(), j0);
  return s.scalar / chi_symbol(a, j0, b);
}

}  // namespace quantcurv
