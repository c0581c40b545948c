#pragma once

// Parallel transport of the L^2 connection along J_t = phi_t^* J0 compared
// with pull-back composed with the Schrodinger propagator.

#include "quantcurv/sphere_quantization.hpp"

#include <array>
#include <memory>

namespace quantcurv {

/// Weighted Frobenius norm sqrt(tr X* W X) of a grid x k block.
inline double weighted_norm(const ComplexMatrix& x, const RealVector& weights) {
  return std::sqrt(std::max(0.0, (x.adjoint() * (weights.asDiagonal() * x)).trace().real()));
}

/// A_t = Pi_0(-i nabla_xi + N H)Pi_0 in the orthonormal frame; Hermitian.
inline ComplexMatrix schrodinger_generator(const SphereHamiltonian& h, const SphereQuantization& sq) {
  return op_full(h, sq);
}

struct SchrodingerResult {
  ComplexMatrix coords;   // S_t restricted to range Pi_0, in the frame Q
  double unitarity_drift;  // || s* s - I ||_HS
};

/// dS/dt = i A S with S_0 = Pi_0, integrated by RK4 in the frame Q.
inline SchrodingerResult schrodinger_propagate(const ComplexMatrix& a, double t_end, double dt) {
  if (!(t_end >= 0.0) || t_end > 2.0) throw DomainError("schrodinger_propagate: t_end must lie in [0, 2]");
  const ComplexMatrix m = kI * a;
  ComplexMatrix s = ComplexMatrix::Identity(a.rows(), a.cols());
  s = Rk4Stepper(dt).propagate(s, 0.0, t_end, [&m](double, const ComplexMatrix& y) { return ComplexMatrix(m * y); });
  SchrodingerResult r{s, (s.adjoint() * s - ComplexMatrix::Identity(a.rows(), a.cols())).norm()};
  const double budget = 100.0 * std::pow(dt, 4) * t_end + 1e-12 * double(a.rows());
  if (r.unitarity_drift > budget) {
    std::ostringstream msg;
    msg << "schrodinger_propagate: unitarity drift " << r.unitarity_drift << " exceeds " << budget
        << "; reduce dt";
    throw StepSizeError(msg.str());
  }
  return r;
}

inline SchrodingerResult schrodinger_propagate(const SphereHamiltonian& h, const SphereQuantization& sq,
                                               double t_end, double dt) {
  return schrodinger_propagate(schrodinger_generator(h, sq), t_end, dt);
}

/// exp(i A t) by eigendecomposition of the Hermitian matrix A.
inline ComplexMatrix schrodinger_exact(const ComplexMatrix& a, double t) {
  const ComplexMatrix herm = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(herm);
  ComplexVector phase(eig.eigenvalues().size());
  for (Eigen::Index i = 0; i < phase.size(); ++i) phase[i] = std::polar(1.0, eig.eigenvalues()[i] * t);
  return eig.eigenvectors() * phase.asDiagonal() * eig.eigenvectors().adjoint();
}

enum class TransportMethod {
  /// P = F_t C_t with dC/dt = -(F* W F)^{-1} F* W dF/dt C, which keeps P in
  /// the range of Pi_t exactly.
  kFrameCoefficients,
  /// RK4 on the grid for dP/dt = (dPi_t/dt) P, then P <- Pi_t P each step.
  kGridRetraction,
};

struct TransportOptions {
  double dt = 1e-3;
  int residual_samples = 10;
  TransportMethod method = TransportMethod::kFrameCoefficients;
};

struct TransportState {
  double t = 0.0;
  ComplexMatrix pullback;    // V_t Q
  ComplexMatrix schrodinger;  // S_t in the frame Q
  ComplexMatrix transport;    // P_t Q on the grid
};

struct TransportReport {
  TransportState state;
  double intertwine = 0.0;        // ||P_t - V_t^{-1} S_t||_HS / sqrt(N+1)
  double pt1_range = 0.0;         // max ||Pi_t dP/dt|| / sqrt(N+1)
  double pt1_derivative = 0.0;    // max ||dPi/dt P - dP/dt|| / sqrt(N+1)
  double isometry_defect = 0.0;   // ||(P Q)* W (P Q) - I||_HS
  double pullback_defect = 0.0;   // ||(V Q)* W (V Q) - I||_HS
  double schrodinger_drift = 0.0;
  int steps = 0;
};

namespace detail {

/// Frame F = U o f_{-s}, its time derivative, and the pieces of Pi_s.
struct MovingFrame {
  ComplexMatrix lift;
  ComplexMatrix stacked;   // [F, dF/ds]
  ComplexMatrix weighted;  // W [F, dF/ds]
  ComplexMatrix gram_inv;
  ComplexMatrix gdot;      // d/ds (F* W F)
  ComplexMatrix connection;  // G^{-1} F* W dF/ds

  MovingFrame(const SphereHamiltonian& h, int level, const RealVector& w, ComplexMatrix l) : lift(std::move(l)) {
    const Eigen::Index d = level + 1;
    stacked.resize(lift.rows(), 2 * d);
    stacked.leftCols(d) = section_frame(level, lift);
    stacked.rightCols(d) = -section_frame_derivative(level, lift, lifted_field_rows(h, lift));
    weighted = w.asDiagonal() * stacked;
    const ComplexMatrix g = weighted.leftCols(d).adjoint() * stacked;
    gram_inv = g.leftCols(d).inverse();
    gdot = g.rightCols(d) + g.rightCols(d).adjoint();
    connection = gram_inv * g.rightCols(d);
  }

  ComplexMatrix span(const ComplexMatrix& c) const { return stacked.leftCols(dim()) * c; }

  Eigen::Index dim() const { return stacked.cols() / 2; }

  ComplexMatrix project(const ComplexMatrix& x) const {
    const Eigen::Index d = dim();
    return stacked.leftCols(d) * (gram_inv * (weighted.leftCols(d).adjoint() * x));
  }

  /// (d/ds Pi_s) x for the projector Pi_s = F G^{-1} F* W.
  ComplexMatrix projector_derivative(const ComplexMatrix& x) const {
    const Eigen::Index d = dim();
    const ComplexMatrix c = weighted.adjoint() * x;
    ComplexMatrix coef(2 * d, x.cols());
    const ComplexMatrix gx = gram_inv * c.topRows(d);
    coef.topRows(d) = gram_inv * (c.bottomRows(d) - gdot * gx);
    coef.bottomRows(d) = gx;
    return stacked * coef;
  }
};

inline ComplexMatrix step_lift(const SphereHamiltonian& h, const ComplexMatrix& lift, double dt) {
  ComplexMatrix out(lift.rows(), 2);
  for (Eigen::Index i = 0; i < lift.rows(); ++i) {
    C2 p(lift(i, 0), lift(i, 1));
    p = Rk4Stepper::step(p, 0.0, dt, [&h](double, const C2& y) { return lifted_field(h, y); });
    const double norm = p.norm();
    if (std::abs(norm - 1.0) > 1e-6) {
      std::ostringstream msg;
      msg << "parallel_transport: flow left S^3 by " << std::abs(norm - 1.0) << "; reduce dt";
      throw StepSizeError(msg.str());
    }
    out.row(i) = (p / norm).transpose();
  }
  return out;
}

}  // namespace detail

/// Integrates dP/dt = (dPi_t/dt) P from P_0 = Q with RK4 (see TransportMethod),
/// alongside V_t and S_t on the same time grid, and evaluates the
/// intertwining residual and both transport equations at interior sample times.
inline TransportReport parallel_transport(const SphereHamiltonian& h, const SphereQuantization& sq, double t_end,
                                          const TransportOptions& opt = {}) {
  if (!(t_end >= 0.0) || t_end > 2.0) throw DomainError("parallel_transport: t_end must lie in [0, 2]");
  if (!(opt.dt > 0.0)) throw DomainError("parallel_transport: dt must be positive");
  const RealVector& w = sq.weights();
  const int level = sq.level();
  const double root_dim = std::sqrt(double(sq.dim()));
  const ComplexMatrix& coeff = sq.projector().coefficients();
  const ComplexMatrix& q0 = sq.projector().frame();

  TransportReport rep;
  const int steps = t_end == 0.0 ? 0 : Rk4Stepper(opt.dt).steps_for(0.0, t_end);
  const double dt = steps ? t_end / steps : 0.0;
  rep.steps = steps;

  // sample steps strictly inside the path with two neighbours on either side
  std::vector<int> samples;
  if (steps >= 6) {
    for (int j = 1; j <= opt.residual_samples; ++j) {
      const int k = 2 + static_cast<int>(std::lround(double(j) * (steps - 4) / (opt.residual_samples + 1)));
      if (samples.empty() || k != samples.back()) samples.push_back(k);
    }
  }

  ComplexMatrix p = q0;
  ComplexMatrix c = coeff;
  auto frame = std::make_shared<const detail::MovingFrame>(h, level, w, sq.grid().lift());
  std::array<ComplexMatrix, 5> history;
  std::array<std::shared_ptr<const detail::MovingFrame>, 5> frames;
  auto remember = [&](int k) {
    history[k % 5] = p;
    frames[k % 5] = frame;
  };
  remember(0);
  std::size_t next_sample = 0;

  for (int k = 0; k < steps; ++k) {
    const detail::MovingFrame mid(h, level, w, detail::step_lift(h, frame->lift, -0.5 * dt));
    auto end = std::make_shared<const detail::MovingFrame>(h, level, w, detail::step_lift(h, mid.lift, -0.5 * dt));
    if (opt.method == TransportMethod::kGridRetraction) {
      const ComplexMatrix k1 = frame->projector_derivative(p);
      const ComplexMatrix k2 = mid.projector_derivative(p + 0.5 * dt * k1);
      const ComplexMatrix k3 = mid.projector_derivative(p + 0.5 * dt * k2);
      const ComplexMatrix k4 = end->projector_derivative(p + dt * k3);
      p += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      p = end->project(p);
    } else {
      const ComplexMatrix k1 = -frame->connection * c;
      const ComplexMatrix k2 = -mid.connection * (c + 0.5 * dt * k1);
      const ComplexMatrix k3 = -mid.connection * (c + 0.5 * dt * k2);
      const ComplexMatrix k4 = -end->connection * (c + dt * k3);
      c += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      p = end->span(c);
    }
    frame = std::move(end);
    remember(k + 1);

    if (next_sample < samples.size() && k + 1 == samples[next_sample] + 2) {
      const int ks = samples[next_sample];
      const ComplexMatrix pdot = (history[(ks - 2) % 5] - 8.0 * history[(ks - 1) % 5] +
                                  8.0 * history[(ks + 1) % 5] - history[(ks + 2) % 5]) /
                                 (12.0 * dt);
      const detail::MovingFrame& fc = *frames[ks % 5];
      rep.pt1_range = std::max(rep.pt1_range, weighted_norm(fc.project(pdot), w) / root_dim);
      rep.pt1_derivative =
          std::max(rep.pt1_derivative, weighted_norm(fc.projector_derivative(history[ks % 5]) - pdot, w) / root_dim);
      ++next_sample;
    }
  }

  rep.state.t = t_end;
  rep.state.transport = p;
  const ComplexMatrix g = weighted_gram(p, w);
  rep.isometry_defect = (g - ComplexMatrix::Identity(g.rows(), g.cols())).norm();

  const ComplexMatrix a = schrodinger_generator(h, sq);
  const SchrodingerResult s = schrodinger_propagate(a, t_end, opt.dt);
  rep.state.schrodinger = s.coords;
  rep.schrodinger_drift = s.unitarity_drift;

  // V_t^{-1} S_t Q = (Q o f_{-t}) s_t, using the same backward positions.
  const ComplexMatrix back = section_frame(level, frame->lift) * coeff;
  rep.intertwine = weighted_norm(p - back * s.coords, w) / root_dim;

  const PullbackResult v = pullback_flow(h, sq, t_end, opt.dt);
  rep.state.pullback = v.frame;
  rep.pullback_defect = v.unitarity_defect;
  return rep;
}

/// ||P_t - V_t^{-1} S_t||_HS / sqrt(N+1).
inline double intertwine_check(const SphereHamiltonian& h, const SphereQuantization& sq, double t_end,
                               const TransportOptions& opt = {}) {
  return parallel_transport(h, sq, t_end, opt).intertwine;
}

}  // namespace quantcurv
