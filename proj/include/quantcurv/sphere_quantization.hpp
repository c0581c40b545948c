#pragma once

// Berezin-Toeplitz quantization of CP^1 at level N.
//
// Sections of O(N) are sampled as charge-N functions on S^3: the section
// with chart coefficient f(z) corresponds to F(w) = w0^N f(w1/w0), and the
// fiber metric becomes |F|^2. Operators are dense matrices on the grid with
// the quadrature-weighted pairing, stored in low-rank form where possible.

#include "quantcurv/hamiltonian.hpp"
#include "quantcurv/symplectic_linear.hpp"

namespace quantcurv {

namespace detail {
inline double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

inline RealVector sqrt_binomials(int level) {
  RealVector c(level + 1);
  for (int k = 0; k <= level; ++k) c[k] = std::exp(0.5 * log_binomial(level, k));
  return c;
}

/// Row-wise powers w^0 .. w^level.
inline ComplexMatrix power_table(const ComplexMatrix& lift, int col, int level) {
  ComplexMatrix p(lift.rows(), level + 1);
  p.col(0).setOnes();
  for (int j = 1; j <= level; ++j) p.col(j) = p.col(j - 1).cwiseProduct(lift.col(col));
  return p;
}
}  // namespace detail

/// Columns F_k = sqrt(C(N,k)) w0^{N-k} w1^k, evaluated at the rows of `lift`.
/// Their continuum Gram matrix is pi/(N+1) times the identity.
inline ComplexMatrix section_frame(int level, const ComplexMatrix& lift) {
  const RealVector c = detail::sqrt_binomials(level);
  const ComplexMatrix pa = detail::power_table(lift, 0, level);
  const ComplexMatrix pb = detail::power_table(lift, 1, level);
  ComplexMatrix u(lift.rows(), level + 1);
  for (int k = 0; k <= level; ++k) u.col(k) = c[k] * pa.col(level - k).cwiseProduct(pb.col(k));
  return u;
}

/// dF_k(v) for tangent vectors v given row-wise.
inline ComplexMatrix section_frame_derivative(int level, const ComplexMatrix& lift, const ComplexMatrix& v) {
  const RealVector c = detail::sqrt_binomials(level);
  const ComplexMatrix pa = detail::power_table(lift, 0, level);
  const ComplexMatrix pb = detail::power_table(lift, 1, level);
  ComplexMatrix d = ComplexMatrix::Zero(lift.rows(), level + 1);
  for (int k = 0; k <= level; ++k) {
    if (level - k > 0)
      d.col(k) += (c[k] * double(level - k)) * pa.col(level - k - 1).cwiseProduct(pb.col(k)).cwiseProduct(v.col(0));
    if (k > 0)
      d.col(k) += (c[k] * double(k)) * pa.col(level - k).cwiseProduct(pb.col(k - 1)).cwiseProduct(v.col(1));
  }
  return d;
}

/// Raw chart monomials z^k in the frame of weight (1+|z|^2)^{-N}, i.e.
/// w0^{N-k} w1^k on S^3.
inline ComplexMatrix monomial_frame(int level, const ComplexMatrix& lift) {
  const ComplexMatrix pa = detail::power_table(lift, 0, level);
  const ComplexMatrix pb = detail::power_table(lift, 1, level);
  ComplexMatrix u(lift.rows(), level + 1);
  for (int k = 0; k <= level; ++k) u.col(k) = pa.col(level - k).cwiseProduct(pb.col(k));
  return u;
}

/// Closed form of the monomial Gram diagonal, pi k!(N-k)!/(N+1)!.
inline double monomial_norm_squared(int level, int k) {
  return std::numbers::pi *
         std::exp(std::lgamma(k + 1.0) + std::lgamma(level - k + 1.0) - std::lgamma(level + 2.0));
}

/// Weighted Gram matrix of the raw monomials.
inline ComplexMatrix sphere_gram(int level, const SphereGrid& grid) {
  return weighted_gram(monomial_frame(level, grid.lift()), grid.weights());
}

/// Orthogonal projector onto the span of a frame, kept in the factored
/// form P = Q Q* W with Q orthonormal for the weighted pairing.
class FrameProjector {
public:
  FrameProjector(const ComplexMatrix& frame, const RealVector& weights, double max_condition = 1e8)
      : weights_(weights) {
    const ComplexMatrix gram = weighted_gram(frame, weights);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(gram);
    const RealVector& lambda = eig.eigenvalues();
    if (!(lambda.minCoeff() > 0.0) || lambda.maxCoeff() / lambda.minCoeff() > max_condition) {
      std::ostringstream msg;
      msg << "FrameProjector: frame is ill conditioned, smallest Gram eigenvalue " << lambda.minCoeff()
          << ", largest " << lambda.maxCoeff();
      throw ConditioningError(msg.str(), lambda.minCoeff());
    }
    coeff_ = eig.eigenvectors() * lambda.cwiseSqrt().cwiseInverse().asDiagonal() * eig.eigenvectors().adjoint();
    q_ = frame * coeff_;
  }

  /// Orthonormal frame Q.
  const ComplexMatrix& frame() const noexcept { return q_; }
  /// Gram^{-1/2} of the input frame, so that Q = frame * coefficients().
  const ComplexMatrix& coefficients() const noexcept { return coeff_; }
  const RealVector& weights() const noexcept { return weights_; }
  Eigen::Index rank() const noexcept { return q_.cols(); }

  ComplexMatrix apply(const ComplexMatrix& x) const { return q_ * (q_.adjoint() * (weights_.asDiagonal() * x)); }
  ComplexMatrix coordinates(const ComplexMatrix& x) const { return q_.adjoint() * (weights_.asDiagonal() * x); }
  ComplexMatrix dense() const { return q_ * (q_.adjoint() * weights_.asDiagonal()); }

  /// Q* W diag(f) Q.
  ComplexMatrix compress(const RealVector& f) const {
    return q_.adjoint() * ((weights_.array() * f.array()).matrix().asDiagonal() * q_);
  }

private:
  RealVector weights_;
  ComplexMatrix coeff_;
  ComplexMatrix q_;
};

/// Level, grid and the holomorphic section space at the round structure.
class SphereQuantization {
public:
  SphereQuantization(int level, SphereGrid grid) : level_(level), grid_(std::move(grid)), proj_(build(level, grid_)) {}

  explicit SphereQuantization(int level) : SphereQuantization(level, SphereGrid::for_level(level)) {}

  int level() const noexcept { return level_; }
  int dim() const noexcept { return level_ + 1; }
  const SphereGrid& grid() const noexcept { return grid_; }
  const FrameProjector& projector() const noexcept { return proj_; }
  const RealVector& weights() const noexcept { return grid_.weights(); }

  /// Binomially scaled frame F_k on the grid.
  ComplexMatrix raw_frame() const { return section_frame(level_, grid_.lift()); }

  /// Weighted inner products A* W B.
  ComplexMatrix inner(const ComplexMatrix& a, const ComplexMatrix& b) const {
    return weighted_inner(a, b, grid_.weights());
  }

private:
  static FrameProjector build(int level, const SphereGrid& grid) {
    if (level < 1) throw DomainError("SphereQuantization: level must be positive");
    const FrameProjector p(section_frame(level, grid.lift()), grid.weights());
    if (!grid.resolves(level)) {
      const RealVector lambda =
          Eigen::SelfAdjointEigenSolver<ComplexMatrix>(weighted_gram(section_frame(level, grid.lift()), grid.weights()))
              .eigenvalues();
      std::ostringstream msg;
      msg << "SphereQuantization: grid " << grid.n_radial() << "x" << grid.n_angular()
          << " does not resolve level " << level << " (needs " << GridPolicy::radial(level) << "x"
          << GridPolicy::angular(level) << "); smallest Gram eigenvalue " << lambda.minCoeff();
      throw ConditioningError(msg.str(), lambda.minCoeff());
    }
    return p;
  }

  int level_;
  SphereGrid grid_;
  FrameProjector proj_;
};

inline const FrameProjector& build_projector(const SphereQuantization& sq) { return sq.projector(); }

/// Lifted field eta evaluated at each row of `lift`.
inline ComplexMatrix lifted_field_rows(const SphereHamiltonian& h, const ComplexMatrix& lift) {
  ComplexMatrix eta(lift.rows(), 2);
  for (Eigen::Index i = 0; i < lift.rows(); ++i)
    eta.row(i) = lifted_field(h, C2(lift(i, 0), lift(i, 1))).transpose();
  return eta;
}

/// The prequantum generator  nabla_xi + i N H  on sections, realized as the
/// derivative of charge-N functions along the lifted field.
struct GeneratorAction {
  ComplexMatrix on_frame;    // G Q on the grid
  ComplexMatrix compressed;  // Q* W G Q
};

inline GeneratorAction prequantum_generator(const SphereHamiltonian& h, const SphereQuantization& sq) {
  const ComplexMatrix& lift = sq.grid().lift();
  const ComplexMatrix gu = section_frame_derivative(sq.level(), lift, lifted_field_rows(h, lift));
  GeneratorAction g;
  g.on_frame = gu * sq.projector().coefficients();
  g.compressed = sq.inner(sq.projector().frame(), g.on_frame);
  return g;
}

/// Chart form of the generator on a holomorphic coefficient f:
/// xi^z f' + q f with q = -N zbar xi^z / (1+|z|^2) + i N H.
inline Complex chart_generator(const SphereHamiltonian& h, int level, Complex z, Complex f, Complex fprime) {
  const auto [xx, xy] = h.chart_vector_field(z);
  const Complex xiz(xx, xy);
  const Complex q = -double(level) * std::conj(z) * xiz / (1.0 + std::norm(z)) + kI * double(level) * h.chart_value(z);
  return xiz * fprime + q * f;
}

/// Chern connection of the weight (1+|z|^2)^{-N}: nabla_xi f = xi(f) - N zbar xi^z/(1+|z|^2) f.
/// `df` holds (df/dz, df/dzbar).
inline Complex chart_connection(int level, Complex z, double xi_x, double xi_y, Complex f,
                                std::pair<Complex, Complex> df) {
  const Complex xiz(xi_x, xi_y);
  return xiz * df.first + std::conj(xiz) * df.second - double(level) * std::conj(z) * xiz / (1.0 + std::norm(z)) * f;
}

/// Pi M_f Pi compressed to the orthonormal frame.
inline ComplexMatrix toeplitz_mult(const RealVector& f, const SphereQuantization& sq) {
  if (f.size() != sq.grid().size()) throw DimensionError("toeplitz_mult: symbol has wrong length");
  return sq.projector().compress(f);
}

inline RealVector sample(const SphereHamiltonian& h, const SphereGrid& grid) {
  RealVector v(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) v[i] = h.value(grid.point(i));
  return v;
}

inline ComplexMatrix toeplitz_mult(const SphereHamiltonian& h, const SphereQuantization& sq) {
  return toeplitz_mult(sample(h, sq.grid()), sq);
}

/// Pi(-i nabla_xi + N H)Pi, which is -i times the compressed generator.
inline ComplexMatrix op_full(const SphereHamiltonian& h, const SphereQuantization& sq) {
  return -kI * prequantum_generator(h, sq).compressed;
}

/// Poisson bracket {f, g} = xi_f(g) sampled on the grid.
inline RealVector poisson_bracket(const SphereHamiltonian& f, const SphereHamiltonian& g, const SphereGrid& grid) {
  RealVector v(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const Vec3 x = grid.point(i);
    v[i] = f.vector_field(x).dot(g.gradient(x));
  }
  return v;
}

inline constexpr double kDefaultFlowStep = 1e-3;

/// Pull-back by the lifted flow applied to the orthonormal frame: V_t Q = Q o f_t.
struct PullbackResult {
  ComplexMatrix frame;     // V_t Q on the grid
  double unitarity_defect;  // || (V_t Q)* W (V_t Q) - I ||_HS
};

inline PullbackResult pullback_flow(const SphereHamiltonian& h, const SphereQuantization& sq, double t,
                                    double dt = kDefaultFlowStep) {
  if (std::abs(t) > 2.0) throw DomainError("pullback_flow: |t| must not exceed 2");
  const ComplexMatrix moved = flow_points(h, sq.grid().lift(), t, dt);
  PullbackResult r;
  r.frame = section_frame(sq.level(), moved) * sq.projector().coefficients();
  const ComplexMatrix g = sq.inner(r.frame, r.frame);
  r.unitarity_defect = (g - ComplexMatrix::Identity(g.rows(), g.cols())).norm();
  return r;
}

/// Pi_t = V_t^{-1} Pi_0 V_t, the projector onto sections composed with f_{-t}.
inline FrameProjector projector_curve(const SphereHamiltonian& h, const SphereQuantization& sq, double t,
                                      double dt = kDefaultFlowStep) {
  if (std::abs(t) > 2.0) throw DomainError("projector_curve: |t| must not exceed 2");
  const ComplexMatrix moved = flow_points(h, sq.grid().lift(), -t, dt);
  return FrameProjector(section_frame(sq.level(), moved), sq.weights());
}

// ---------------------------------------------------------------------------
// Tangent vectors to the family of complex structures
// ---------------------------------------------------------------------------

/// J v = v x X on T_X S^2, extended by zero in the normal direction.
inline Mat3 complex_structure(const Vec3& x) { return -cross_matrix(x); }

inline Mat3 tangent_projector(const Vec3& x) { return Mat3::Identity() - x * x.transpose(); }

/// A = d/dt (phi_t^* J) at t = 0, which equals [J, nabla xi].
inline Mat3 tangent_structure_exact(const SphereHamiltonian& h, const Vec3& x) {
  const Mat3 pt = tangent_projector(x);
  const Mat3 nabla = pt * h.vector_field_jacobian(x) * pt;
  const Mat3 j = complex_structure(x);
  return j * nabla - nabla * j;
}

/// The same tangent vector from the flow differential: J_t = dphi_t^{-1} J dphi_t
/// with dphi_t from the variational equation, differentiated by Richardson
/// central differences with step h.
inline Mat3 tangent_structure_fd(const SphereHamiltonian& h, const Vec3& x, double step = 1e-3, double dt = 1e-4) {
  const Mat3 pt = tangent_projector(x);
  Eigen::JacobiSVD<Mat3> svd(pt, Eigen::ComputeFullU);
  const Eigen::Matrix<double, 3, 2> e = svd.matrixU().leftCols<2>();
  auto pulled = [&](double t) -> Mat3 {
    const FlowWithDifferential f = flow_with_differential(h, x, t, dt);
    const Eigen::Matrix<double, 3, 2> image = f.differential * e;
    const Eigen::Matrix<double, 3, 2> jimage = complex_structure(f.point) * image;
    const Eigen::Matrix2d b = image.colPivHouseholderQr().solve(jimage);
    return e * b * e.transpose();
  };
  return richardson_difference(pulled, 0.0, step);
}

/// A field over the grid (column-major 3x3 blocks stacked by point).
inline std::vector<Mat3> tangent_structure(const SphereHamiltonian& h, const SphereGrid& grid) {
  std::vector<Mat3> a(static_cast<std::size_t>(grid.size()));
  for (Eigen::Index i = 0; i < grid.size(); ++i) a[i] = tangent_structure_exact(h, grid.point(i));
  return a;
}

/// chi_{A,B}(x) = tr(A_x J_x B_x).
inline RealVector chi_field(const SphereHamiltonian& h1, const SphereHamiltonian& h2, const SphereGrid& grid) {
  RealVector chi(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const Vec3 x = grid.point(i);
    chi[i] = (tangent_structure_exact(h1, x) * complex_structure(x) * tangent_structure_exact(h2, x)).trace();
  }
  return chi;
}

// ---------------------------------------------------------------------------
// Curvature of the L^2 connection at the round structure
// ---------------------------------------------------------------------------

/// Pi[G2,G1]Pi - [Pi G2 Pi, Pi G1 Pi] compressed to the range of Pi_0, using
/// anti-Hermiticity of the generators to write Pi G_a G_b Pi = -<G_a Q, G_b Q>.
inline ComplexMatrix curvature_commutator(const GeneratorAction& g1, const GeneratorAction& g2,
                                          const SphereQuantization& sq) {
  const ComplexMatrix& m1 = g1.compressed;
  const ComplexMatrix& m2 = g2.compressed;
  return -sq.inner(g2.on_frame, g1.on_frame) + sq.inner(g1.on_frame, g2.on_frame) - (m2 * m1 - m1 * m2);
}

inline ComplexMatrix curvature_commutator(const SphereHamiltonian& h1, const SphereHamiltonian& h2,
                                          const SphereQuantization& sq) {
  return curvature_commutator(prequantum_generator(h1, sq), prequantum_generator(h2, sq), sq);
}

/// Pi_0 [d1 Pi, d2 Pi] Pi_0 compressed to the range of Pi_0, with each
/// derivative of the projector curve taken by central differences (and one
/// Richardson refinement when `richardson` is set).
inline ComplexMatrix curvature_fd(const SphereHamiltonian& h1, const SphereHamiltonian& h2,
                                  const SphereQuantization& sq, double h, bool richardson = true,
                                  double dt = kDefaultFlowStep) {
  if (h < 1e-4 || h > 1e-2) throw DomainError("curvature_fd: step h must lie in [1e-4, 1e-2]");
  const FrameProjector& p0 = sq.projector();
  const ComplexMatrix& q = p0.frame();
  const double flow_dt = std::min(dt, h / 2.0);

  struct Curve {
    FrameProjector plus, minus, plus_half, minus_half;
  };
  auto make = [&](const SphereHamiltonian& ham) {
    return Curve{projector_curve(ham, sq, h, flow_dt), projector_curve(ham, sq, -h, flow_dt),
                 projector_curve(ham, sq, 0.5 * h, flow_dt), projector_curve(ham, sq, -0.5 * h, flow_dt)};
  };
  const Curve c1 = make(h1);
  const Curve c2 = make(h2);

  auto derivative = [&](const Curve& c, const ComplexMatrix& y) -> ComplexMatrix {
    const ComplexMatrix coarse = (c.plus.apply(y) - c.minus.apply(y)) / (2.0 * h);
    if (!richardson) return coarse;
    const ComplexMatrix fine = (c.plus_half.apply(y) - c.minus_half.apply(y)) / h;
    return (4.0 * fine - coarse) / 3.0;
  };
  const ComplexMatrix d1q = derivative(c1, q);
  const ComplexMatrix d2q = derivative(c2, q);
  const ComplexMatrix a = p0.coordinates(derivative(c1, d2q));
  const ComplexMatrix b = p0.coordinates(derivative(c2, d1q));
  return a - b;
}

// ---------------------------------------------------------------------------
// Semiclassical comparison
// ---------------------------------------------------------------------------

/// Constant relating curvature to the symbol, Curv = kappa chi Id, fixed by
/// the flat model (see bargmann.hpp::linear_symbol_constant).
inline constexpr Complex kSymbolConstant{0.0, -0.125};

struct ConvergenceRow {
  int level = 0;
  int dim = 0;
  double eps = 0.0;
  double trace_lhs = 0.0;
  double trace_rhs = 0.0;
  double moment2_lhs = 0.0;
  double moment2_rhs = 0.0;
  double chi_rms = 0.0;
  double anti_hermitian_defect = 0.0;
};

/// One level of the comparison (1/dim) ||Upsilon/kappa - T_chi||_2^2.
inline ConvergenceRow convergence_row(const SphereHamiltonian& h1, const SphereHamiltonian& h2, int level,
                              Complex kappa = kSymbolConstant) {
  const SphereQuantization sq(level);
  const ComplexMatrix ups = curvature_commutator(h1, h2, sq);
  const RealVector chi = chi_field(h1, h2, sq.grid());
  const ComplexMatrix t = toeplitz_mult(chi, sq);
  const ComplexMatrix scaled = ups / kappa;
  ConvergenceRow r;
  r.level = level;
  r.dim = sq.dim();
  r.eps = (scaled - t).squaredNorm() / sq.dim();
  r.trace_lhs = scaled.trace().real() / sq.dim();
  r.trace_rhs = sq.grid().average(chi);
  r.moment2_lhs = (scaled.adjoint() * scaled).trace().real() / sq.dim();
  r.moment2_rhs = sq.grid().average(chi.array().square().matrix());
  r.chi_rms = std::sqrt(r.moment2_rhs);
  r.anti_hermitian_defect = (ups + ups.adjoint()).norm() / std::max(ups.norm(), kAbsoluteFloor);
  return r;
}

inline std::vector<ConvergenceRow> theorem_main_experiment(const SphereHamiltonian& h1, const SphereHamiltonian& h2,
                                                       const std::vector<int>& levels,
                                                       Complex kappa = kSymbolConstant) {
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (levels[i] <= levels[i - 1]) throw DomainError("theorem_main_experiment: levels must be ascending");
  std::vector<ConvergenceRow> rows;
  for (int n : levels) rows.push_back(convergence_row(h1, h2, n, kappa));
  return rows;
}

/// Least-squares slope of log y against log x.
inline double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("log_log_slope: need two or more points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace quantcurv
