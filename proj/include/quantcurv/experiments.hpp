#pragma once

// Experiment runners shared by the command-line driver and the acceptance
// binary. Each runner returns rows of (check, parameters, measured value,
// tolerance, pass flag); file formats live in tools/.

#include "quantcurv/bargmann.hpp"
#include "quantcurv/schrodinger.hpp"
#include "quantcurv/teichmuller.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <variant>

namespace quantcurv::experiments {

using Cell = std::variant<long long, double, std::string>;

enum class Comparison { kAtMost, kAtLeast, kInRange, kReport };

struct ResultRow {
  std::string check;
  std::vector<std::pair<std::string, Cell>> fields;
  double value = 0.0;
  double tolerance = 0.0;
  double tolerance_hi = 0.0;  // upper end for kInRange
  Comparison comparison = Comparison::kReport;
  bool pass = true;
};

struct ExperimentResult {
  std::string experiment;
  std::vector<ResultRow> rows;

  bool passed() const {
    return std::all_of(rows.begin(), rows.end(), [](const ResultRow& r) { return r.pass; });
  }
};

inline ResultRow at_most(std::string check, double value, double tol,
                         std::vector<std::pair<std::string, Cell>> fields = {}) {
  return {std::move(check), std::move(fields), value, tol, 0.0, Comparison::kAtMost, value <= tol};
}

inline ResultRow at_least(std::string check, double value, double tol,
                          std::vector<std::pair<std::string, Cell>> fields = {}) {
  return {std::move(check), std::move(fields), value, tol, 0.0, Comparison::kAtLeast, value >= tol};
}

inline ResultRow in_range(std::string check, double value, double lo, double hi,
                          std::vector<std::pair<std::string, Cell>> fields = {}) {
  return {std::move(check), std::move(fields), value, lo, hi, Comparison::kInRange, value >= lo && value <= hi};
}

inline ResultRow report(std::string check, double value, std::vector<std::pair<std::string, Cell>> fields = {}) {
  return {std::move(check), std::move(fields), value, 0.0, 0.0, Comparison::kReport, true};
}

// ---------------------------------------------------------------------------
// bargmann-curvature
// ---------------------------------------------------------------------------

struct BargmannParams {
  std::vector<int> n_list{1, 2};
  std::vector<double> projector_levels{1.0, 4.0, 10.0};
  double level = 4.0;
  int max_degree = 12;
  int random_pairs = 20;
  double tol_projector = 1e-12;
  double tol_curvature = 1e-10;
  double tol_scalar = 1e-8;
  double tol_ratio = 1e-6;

  void validate() const {
    if (n_list.empty()) throw DomainError("bargmann-curvature: n_list is empty");
    for (int n : n_list)
      if (n < 1) throw DomainError("bargmann-curvature: n must be positive");
    for (double l : projector_levels)
      if (!(l > 0.0)) throw DomainError("bargmann-curvature: levels must be positive");
    if (!(level > 0.0)) throw DomainError("bargmann-curvature: level must be positive");
    if (max_degree < 6) throw DomainError("bargmann-curvature: D must be at least 6");
    if (random_pairs < 1) throw DomainError("bargmann-curvature: random_pairs must be positive");
  }
};

namespace detail {

inline BiPolynomial quadratic_monomial(int n, int m, int l, bool conjugate) {
  return BiPolynomial::coordinate(n, m, conjugate) * BiPolynomial::coordinate(n, l, conjugate);
}

/// ||Curv - target Id||_HS over the whole operator block.
inline double identity_deviation(const FockOperator& curv, Complex target) {
  ComplexMatrix d = curv.matrix;
  d.topRows(d.cols()).diagonal().array() -= target;
  return d.norm();
}

inline int delta(int a, int b) { return a == b ? 1 : 0; }

}  // namespace detail

inline ExperimentResult run_bargmann(const BargmannParams& p, std::uint64_t seed) {
  p.validate();
  ExperimentResult out{"bargmann-curvature", {}};

  for (int n : p.n_list) {
    for (double lv : p.projector_levels) {
      const FockTruncation trunc(n, lv, p.max_degree);
      out.rows.push_back(at_most("projector_identity", projector_identity_defect(trunc), p.tol_projector,
                                 {{"n", n}, {"N", lv}, {"D", p.max_degree}}));
    }
  }

  for (int n : p.n_list) {
    const FockTruncation trunc(n, p.level, p.max_degree);
    std::vector<std::pair<int, int>> pairs;
    for (int m = 0; m < n; ++m)
      for (int l = m; l < n; ++l) pairs.emplace_back(m, l);

    double dev_i = 0.0, dev_ii = 0.0, dev_iii = 0.0;
    for (auto [m, l] : pairs) {
      for (auto [r, s] : pairs) {
        const auto zml = detail::quadratic_monomial(n, m, l, false);
        const auto zrs = detail::quadratic_monomial(n, r, s, false);
        const auto bml = detail::quadratic_monomial(n, m, l, true);
        const auto brs = detail::quadratic_monomial(n, r, s, true);
        const double target = 4.0 * (detail::delta(m, r) * detail::delta(l, s) + detail::delta(m, s) * detail::delta(l, r));
        dev_i = std::max(dev_i, detail::identity_deviation(curvature_operator(zml, zrs, trunc), 0.0));
        dev_ii = std::max(dev_ii, detail::identity_deviation(curvature_operator(bml, brs, trunc), 0.0));
        dev_iii = std::max(dev_iii, detail::identity_deviation(curvature_operator(zml, brs, trunc), target));
      }
    }
    const std::vector<std::pair<std::string, Cell>> f{{"n", n}, {"N", p.level}, {"D", p.max_degree}};
    out.rows.push_back(at_most("curv_holo_holo", dev_i, p.tol_curvature, f));
    out.rows.push_back(at_most("curv_anti_anti", dev_ii, p.tol_curvature, f));
    out.rows.push_back(at_most("curv_holo_anti", dev_iii, p.tol_curvature, f));

    const PPlusMinusBasis basis = p_plus_minus_basis(n);
    double dev_pm = 0.0, dev_pp = 0.0, dev_mm = 0.0;
    for (std::size_t a = 0; a < basis.indices.size(); ++a) {
      for (std::size_t b = 0; b < basis.indices.size(); ++b) {
        const auto [m, l] = basis.indices[a];
        const auto [r, s] = basis.indices[b];
        const double k = detail::delta(m, r) * detail::delta(l, s) + detail::delta(m, s) * detail::delta(l, r);
        dev_pm = std::max(dev_pm, detail::identity_deviation(curvature_operator(basis.plus[a], basis.minus[b], trunc),
                                                             Complex(0.0, -8.0 * k)));
        dev_pp = std::max(dev_pp, detail::identity_deviation(curvature_operator(basis.plus[a], basis.plus[b], trunc), 0.0));
        dev_mm = std::max(dev_mm, detail::identity_deviation(curvature_operator(basis.minus[a], basis.minus[b], trunc), 0.0));
      }
    }
    out.rows.push_back(at_most("curv_basis_plus_minus", dev_pm, p.tol_curvature, f));
    out.rows.push_back(at_most("curv_basis_plus_plus", dev_pp, p.tol_curvature, f));
    out.rows.push_back(at_most("curv_basis_minus_minus", dev_mm, p.tol_curvature, f));
  }

  // Scalar curvature on random elements of p for n = 1.
  {
    const FockTruncation trunc(1, p.level, p.max_degree);
    const PPlusMinusBasis basis = p_plus_minus_basis(1);
    std::mt19937_64 rng(seed);
    auto random_p = [&]() {
      return basis.plus[0].scaled(uniform(rng, -1.0, 1.0)) + basis.minus[0].scaled(uniform(rng, -1.0, 1.0));
    };
    double worst_dev = 0.0;
    std::vector<Complex> ratios;
    int drawn = 0;
    while (static_cast<int>(ratios.size()) < p.random_pairs) {
      if (++drawn > 100 * p.random_pairs) throw DomainError("bargmann-curvature: could not draw nondegenerate pairs");
      const QuadraticHamiltonian q1 = random_p();
      const QuadraticHamiltonian q2 = random_p();
      const double om = omega_generators(q1, q2);
      const double scale = q1.generator().matrix().norm() * q2.generator().matrix().norm();
      if (std::abs(om) < 1e-3 * scale) continue;
      const ScalarCurvature sc = verify_scalar_curvature(q1, q2, trunc);
      worst_dev = std::max(worst_dev, sc.deviation);
      ratios.push_back(sc.scalar / om);
    }
    Complex mean(0.0);
    for (Complex r : ratios) mean += r;
    mean /= static_cast<double>(ratios.size());
    double spread = 0.0;
    for (Complex r : ratios) spread = std::max(spread, std::abs(r - mean) / std::abs(mean));
    const std::vector<std::pair<std::string, Cell>> f{{"n", 1}, {"N", p.level}, {"D", p.max_degree},
                                                      {"pairs", p.random_pairs}};
    out.rows.push_back(at_most("scalar_deviation", worst_dev, p.tol_scalar, f));
    out.rows.push_back(at_most("scalar_ratio_spread", spread, p.tol_ratio, f));
    out.rows.push_back(report("scalar_ratio_im", mean.imag(), f));
    out.rows.push_back(report("symbol_constant_im", linear_symbol_constant(p.level, p.max_degree).imag(), f));
  }
  return out;
}

// ---------------------------------------------------------------------------
// sphere-convergence
// ---------------------------------------------------------------------------

struct SphereParams {
  std::vector<int> levels{8, 16, 32, 64};
  SphereHamiltonian h1 = SphereHamiltonian::product(0, 2);
  SphereHamiltonian h2 = SphereHamiltonian::product(0, 1);
  double ratio_max = 0.7;
  int ratio_from_level = 16;
  double slope_lo = -1.5;
  double slope_hi = -0.6;
  double trace_tol = 0.1;
  double trace_noise = 1e-12;
  double gram_tol = 1e-10;
  bool cross_method = true;
  int fd_level = 16;
  double fd_step = 1e-3;
  double fd_tol = 1e-3;
  double fd_ratio_min = 3.5;

  void validate() const {
    if (levels.size() < 2) throw DomainError("sphere-convergence: need at least two levels");
    for (std::size_t i = 0; i < levels.size(); ++i) {
      if (levels[i] < 1) throw DomainError("sphere-convergence: levels must be positive");
      if (i && levels[i] <= levels[i - 1]) throw DomainError("sphere-convergence: levels must be ascending");
    }
    if (h1.is_rotation() || h2.is_rotation())
      throw DomainError("sphere-convergence: both Hamiltonians must be non-isometric");
    if (!(slope_lo < slope_hi)) throw DomainError("sphere-convergence: empty slope range");
    if (fd_level < 1) throw DomainError("sphere-convergence: fd_level must be positive");
    if (fd_step < 2e-4 || fd_step > 1e-2) throw DomainError("sphere-convergence: fd_step must lie in [2e-4, 1e-2]");
  }
};

/// Largest relative deviation of the monomial Gram diagonal from
/// c pi k!(N-k)!/(N+1)! with c fitted by least squares in log space.
inline double gram_diagonal_error(int level, const SphereGrid& grid) {
  const ComplexMatrix g = sphere_gram(level, grid);
  RealVector ratio(level + 1);
  for (int k = 0; k <= level; ++k) ratio[k] = g(k, k).real() / monomial_norm_squared(level, k);
  const double c = std::exp(ratio.array().log().mean());
  return (ratio.array() / c - 1.0).abs().maxCoeff();
}

inline ExperimentResult run_sphere(const SphereParams& p) {
  p.validate();
  ExperimentResult out{"sphere-convergence", {}};
  const std::vector<ConvergenceRow> rows = theorem_main_experiment(p.h1, p.h2, p.levels);

  std::vector<double> ns, eps, trace_err;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ConvergenceRow& r = rows[i];
    const double ratio = i ? r.eps / rows[i - 1].eps : std::numeric_limits<double>::quiet_NaN();
    const double scale = std::max(std::abs(r.trace_rhs), r.chi_rms);
    trace_err.push_back(std::abs(r.trace_lhs - r.trace_rhs) / scale);
    ns.push_back(r.level);
    eps.push_back(r.eps);
    std::vector<std::pair<std::string, Cell>> f{{"N", r.level},
                                                {"dim", r.dim},
                                                {"eps_N", r.eps},
                                                {"ratio", ratio},
                                                {"trace_lhs", r.trace_lhs},
                                                {"trace_rhs", r.trace_rhs},
                                                {"trace_err", trace_err.back()},
                                                {"moment2_lhs", r.moment2_lhs},
                                                {"moment2_rhs", r.moment2_rhs},
                                                {"anti_hermitian_defect", r.anti_hermitian_defect}};
    if (i && rows[i - 1].level >= p.ratio_from_level)
      out.rows.push_back(at_most("eps_ratio", ratio, p.ratio_max, std::move(f)));
    else
      out.rows.push_back(report("eps", r.eps, std::move(f)));
  }
  out.rows.push_back(in_range("eps_slope", log_log_slope(ns, eps), p.slope_lo, p.slope_hi));
  out.rows.push_back(at_most("trace_rel_err", trace_err.back(), p.trace_tol, {{"N", p.levels.back()}}));
  double worst_increase = 0.0;
  for (std::size_t i = 1; i < trace_err.size(); ++i)
    worst_increase = std::max(worst_increase, trace_err[i] - trace_err[i - 1]);
  out.rows.push_back(at_most("trace_err_increase", worst_increase, p.trace_noise));

  for (int n : p.levels) {
    const SphereGrid grid = SphereGrid::for_level(n);
    out.rows.push_back(at_most("gram_diagonal", gram_diagonal_error(n, grid), p.gram_tol,
                               {{"N", n}, {"n_radial", grid.n_radial()}, {"n_angular", grid.n_angular()}}));
  }

  if (p.cross_method) {
    const SphereQuantization sq(p.fd_level);
    const ComplexMatrix ref = curvature_commutator(p.h1, p.h2, sq);
    const double nref = ref.norm();
    auto err = [&](double h, bool rich) { return (curvature_fd(p.h1, p.h2, sq, h, rich) - ref).norm() / nref; };
    const double rich = err(p.fd_step, true);
    const double rich_half = err(p.fd_step / 2, true);
    const double plain = err(p.fd_step, false);
    const double plain_half = err(p.fd_step / 2, false);
    const std::vector<std::pair<std::string, Cell>> f{{"N", p.fd_level}, {"h", p.fd_step}};
    out.rows.push_back(at_most("curvature_fd_richardson", rich, p.fd_tol, f));
    out.rows.push_back(at_least("curvature_fd_halving_ratio", plain / plain_half, p.fd_ratio_min, f));
    out.rows.push_back(report("curvature_fd_richardson_ratio", rich / rich_half, f));
  }
  return out;
}

// ---------------------------------------------------------------------------
// schrodinger-intertwine
// ---------------------------------------------------------------------------

struct TransportCase {
  std::string name;
  SphereHamiltonian h;
  double grid_factor = 1.0;
  double tolerance = 1e-3;
};

struct SchrodingerParams {
  int level = 16;
  double dt = 1e-3;
  double t_end = 1.0;
  double pt1_tol = 1e-5;
  int residual_samples = 10;
  TransportMethod method = TransportMethod::kFrameCoefficients;
  std::vector<TransportCase> cases{
      {"rotation", SphereHamiltonian::rotation(Vec3::UnitZ()), 1.0, 1e-6},
      {"x1x3", SphereHamiltonian::product(0, 2), 1.5, 1e-3},
  };

  void validate() const {
    if (level < 1) throw DomainError("schrodinger-intertwine: level must be positive");
    if (!(dt > 0.0) || dt > 0.1) throw DomainError("schrodinger-intertwine: dt must lie in (0, 0.1]");
    if (!(t_end >= 0.0) || t_end > 2.0) throw DomainError("schrodinger-intertwine: t_end must lie in [0, 2]");
    if (cases.empty()) throw DomainError("schrodinger-intertwine: no cases");
    for (const auto& c : cases)
      if (!(c.grid_factor >= 1.0)) throw DomainError("schrodinger-intertwine: grid_factor must be >= 1");
  }
};

inline ExperimentResult run_schrodinger(const SchrodingerParams& p) {
  p.validate();
  ExperimentResult out{"schrodinger-intertwine", {}};
  TransportOptions opt;
  opt.dt = p.dt;
  opt.residual_samples = p.residual_samples;
  opt.method = p.method;
  for (const auto& c : p.cases) {
    const SphereGrid grid(static_cast<int>(std::ceil(c.grid_factor * GridPolicy::radial(p.level))),
                          static_cast<int>(std::ceil(c.grid_factor * GridPolicy::angular(p.level))));
    const SphereQuantization sq(p.level, grid);
    const TransportReport r = parallel_transport(c.h, sq, p.t_end, opt);
    const std::vector<std::pair<std::string, Cell>> f{{"case", c.name},
                                                      {"N", p.level},
                                                      {"dt", p.dt},
                                                      {"t_end", p.t_end},
                                                      {"n_radial", grid.n_radial()},
                                                      {"n_angular", grid.n_angular()},
                                                      {"isometric", static_cast<long long>(c.h.is_rotation())},
                                                      {"isometry_defect", r.isometry_defect},
                                                      {"pullback_defect", r.pullback_defect},
                                                      {"schrodinger_drift", r.schrodinger_drift}};
    out.rows.push_back(at_most("intertwine", r.intertwine, c.tolerance, f));
    out.rows.push_back(at_most("pt1_range", r.pt1_range, p.pt1_tol, f));
    out.rows.push_back(at_most("pt1_derivative", r.pt1_derivative, p.pt1_tol, f));
  }
  return out;
}

// ---------------------------------------------------------------------------
// teichmuller-symbol
// ---------------------------------------------------------------------------

/// One term w * (-(8/sigma^2) Im(phi1 conj(phi2))) of a user-supplied
/// quadrature sum over surface points.
struct WpSample {
  double weight = 1.0;
  double sigma = 1.0;
  Complex phi1;
  Complex phi2;
};

struct TeichmullerParams {
  int tuples = 1000;
  double tol_pairing = 1e-10;
  double tol_structure = 1e-9;
  double tol_wp = 1e-12;
  std::vector<WpSample> wp_samples;

  void validate() const {
    if (tuples < 1) throw DomainError("teichmuller-symbol: tuples must be positive");
    for (const auto& s : wp_samples)
      if (!(s.sigma > 0.0)) throw DomainError("teichmuller-symbol: sample sigma must be positive");
  }
};

inline ExperimentResult run_teichmuller(const TeichmullerParams& p, std::uint64_t seed) {
  p.validate();
  ExperimentResult out{"teichmuller-symbol", {}};
  std::mt19937_64 rng(seed);
  const Mat2 j0 = slice_j0();
  double pairing = 0.0, symplectic = 0.0, factor = 0.0, wp = 0.0;
  auto random_v = [&]() { return std::polar(std::sqrt(uniform(rng, 0.0, 1.0)), uniform(rng, 0.0, 2.0 * std::numbers::pi)); };
  for (int i = 0; i < p.tuples; ++i) {
    const SlicePoint pt = random_slice_point(rng);
    const Complex v1 = random_v();
    const Complex v2 = random_v();
    const double trace = pairing_trace(pt, slice_variation(pt, v1), slice_variation(pt, v2));
    const double closed = pairing_closed_form(pt, v1, v2);
    const double scale = 8.0 / (pt.sigma * pt.rho0 * pt.f0 * pt.e0) * std::abs(v1) * std::abs(v2);
    pairing = std::max(pairing, std::abs(trace - closed) / std::max(scale, kAbsoluteFloor));

    const Mat2 h = h_matrix(pt);
    symplectic = std::max(symplectic, (h.transpose() * j0 * h - j0).norm());
    const Mat2 g = metric_matrix(pt);
    factor = std::max(factor, (pt.sigma * j0.inverse() * h * j0 * h.inverse() - g).norm() / g.norm());

    // Phi0 = 0 with random f0, E0: the pairing reduces to the WP integrand.
    const SlicePoint flat = SlicePoint::admissible(pt.sigma, pt.f0, 0.0, pt.e0);
    const double red = pairing_trace(flat, slice_variation(flat, v1), slice_variation(flat, v2));
    const double ref = wp_integrand(pt.sigma, v1, v2);
    const double wscale = 8.0 / (pt.sigma * pt.sigma) * std::abs(v1) * std::abs(v2);
    wp = std::max(wp, std::abs(red - ref) / std::max(wscale, kAbsoluteFloor));
  }
  const std::vector<std::pair<std::string, Cell>> f{{"tuples", p.tuples}};
  out.rows.push_back(at_most("pairing_trace_vs_closed", pairing, p.tol_pairing, f));
  out.rows.push_back(at_most("h_symplectic", symplectic, p.tol_structure, f));
  out.rows.push_back(at_most("g0_factorization", factor, p.tol_structure, f));
  out.rows.push_back(at_most("wp_reduction", wp, p.tol_wp, f));
  if (!p.wp_samples.empty()) {
    double sum = 0.0;
    for (const auto& s : p.wp_samples) sum += s.weight * wp_integrand(s.sigma, s.phi1, s.phi2);
    out.rows.push_back(report("wp_quadrature_illustrative", sum,
                              {{"samples", static_cast<long long>(p.wp_samples.size())}}));
  }
  return out;
}

}  // namespace quantcurv::experiments
