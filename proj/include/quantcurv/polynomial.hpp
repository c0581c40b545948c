#pragma once

// Sparse polynomials in (z, zbar) with complex coefficients.

#include "quantcurv/numerics.hpp"

#include <functional>
#include <map>
#include <numeric>
#include <vector>

namespace quantcurv {

using MultiIndex = std::vector<int>;

inline int total_degree(const MultiIndex& a) { return std::accumulate(a.begin(), a.end(), 0); }

inline double multi_factorial(const MultiIndex& a) {
  double r = 1.0;
  for (int k : a) r *= std::tgamma(k + 1.0);
  return r;
}

/// All multi-indices of length n and total degree <= d, ordered by degree
/// and then reverse-lexicographically within a degree.
inline std::vector<MultiIndex> monomials_up_to(int n, int d) {
  std::vector<MultiIndex> out;
  for (int deg = 0; deg <= d; ++deg) {
    MultiIndex a(n, 0);
    // enumerate compositions of deg into n parts
    std::function<void(int, int)> rec = [&](int pos, int left) {
      if (pos == n - 1) {
        a[pos] = left;
        out.push_back(a);
        return;
      }
      for (int k = left; k >= 0; --k) {
        a[pos] = k;
        rec(pos + 1, left - k);
      }
    };
    rec(0, deg);
  }
  return out;
}

/// sum c_{alpha,beta} z^alpha zbar^beta.
class BiPolynomial {
public:
  using Key = std::pair<MultiIndex, MultiIndex>;
  using Terms = std::map<Key, Complex>;

  explicit BiPolynomial(int n = 1) : n_(n) {
    if (n < 1) throw DomainError("BiPolynomial: need at least one variable");
  }

  static BiPolynomial monomial(const MultiIndex& alpha, const MultiIndex& beta, Complex c = 1.0) {
    if (alpha.size() != beta.size()) throw DimensionError("BiPolynomial: index length mismatch");
    BiPolynomial p(static_cast<int>(alpha.size()));
    p.add_term(alpha, beta, c);
    return p;
  }

  /// z_j (holomorphic) or zbar_j (antiholomorphic) as a polynomial.
  static BiPolynomial coordinate(int n, int j, bool conjugate) {
    MultiIndex a(n, 0), b(n, 0);
    (conjugate ? b : a)[j] = 1;
    return monomial(a, b);
  }

  int n() const noexcept { return n_; }
  const Terms& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

  void add_term(const MultiIndex& alpha, const MultiIndex& beta, Complex c) {
    if (static_cast<int>(alpha.size()) != n_ || static_cast<int>(beta.size()) != n_)
      throw DimensionError("BiPolynomial: index length mismatch");
    if (c == Complex(0.0)) return;
    auto [it, inserted] = terms_.try_emplace(Key{alpha, beta}, c);
    if (!inserted) {
      it->second += c;
      if (it->second == Complex(0.0)) terms_.erase(it);
    }
  }

  int holomorphic_degree() const {
    int d = 0;
    for (const auto& [k, c] : terms_) d = std::max(d, total_degree(k.first));
    return d;
  }
  int antiholomorphic_degree() const {
    int d = 0;
    for (const auto& [k, c] : terms_) d = std::max(d, total_degree(k.second));
    return d;
  }

  BiPolynomial& operator+=(const BiPolynomial& o) {
    check(o);
    for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, c);
    return *this;
  }
  BiPolynomial& operator-=(const BiPolynomial& o) {
    check(o);
    for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, -c);
    return *this;
  }
  BiPolynomial& operator*=(Complex s) {
    if (s == Complex(0.0)) {
      terms_.clear();
      return *this;
    }
    for (auto& [k, c] : terms_) c *= s;
    return *this;
  }

  friend BiPolynomial operator+(BiPolynomial a, const BiPolynomial& b) { return a += b; }
  friend BiPolynomial operator-(BiPolynomial a, const BiPolynomial& b) { return a -= b; }
  friend BiPolynomial operator*(BiPolynomial a, Complex s) { return a *= s; }
  friend BiPolynomial operator*(Complex s, BiPolynomial a) { return a *= s; }

  friend BiPolynomial operator*(const BiPolynomial& a, const BiPolynomial& b) {
    a.check(b);
    BiPolynomial r(a.n_);
    MultiIndex al(a.n_), be(a.n_);
    for (const auto& [ka, ca] : a.terms_) {
      for (const auto& [kb, cb] : b.terms_) {
        for (int j = 0; j < a.n_; ++j) {
          al[j] = ka.first[j] + kb.first[j];
          be[j] = ka.second[j] + kb.second[j];
        }
        r.add_term(al, be, ca * cb);
      }
    }
    return r;
  }

  /// d/dz_j, or d/dzbar_j when `conjugate` is set.
  BiPolynomial derivative(int j, bool conjugate) const {
    BiPolynomial r(n_);
    for (const auto& [k, c] : terms_) {
      const int e = conjugate ? k.second[j] : k.first[j];
      if (e == 0) continue;
      MultiIndex a = k.first, b = k.second;
      (conjugate ? b : a)[j] -= 1;
      r.add_term(a, b, c * static_cast<double>(e));
    }
    return r;
  }

  /// Value at a point z (zbar taken as the conjugate).
  Complex operator()(const ComplexVector& z) const {
    Complex s = 0.0;
    for (const auto& [k, c] : terms_) {
      Complex t = c;
      for (int j = 0; j < n_; ++j)
        t *= std::pow(z[j], k.first[j]) * std::pow(std::conj(z[j]), k.second[j]);
      s += t;
    }
    return s;
  }

  double max_abs_coefficient() const {
    double m = 0.0;
    for (const auto& [k, c] : terms_) m = std::max(m, std::abs(c));
    return m;
  }

private:
  void check(const BiPolynomial& o) const {
    if (o.n_ != n_) throw DimensionError("BiPolynomial: variable count mismatch");
  }

  int n_;
  Terms terms_;
};

/// Holomorphic polynomial f(z) with a hard degree cap.
class HoloPolynomial {
public:
  HoloPolynomial(int n, int max_degree) : n_(n), max_degree_(max_degree) {}

  int n() const noexcept { return n_; }
  int max_degree() const noexcept { return max_degree_; }
  const std::map<MultiIndex, Complex>& coefficients() const noexcept { return coeffs_; }

  void add(const MultiIndex& alpha, Complex c) {
    if (static_cast<int>(alpha.size()) != n_) throw DimensionError("HoloPolynomial: index length");
    if (total_degree(alpha) > max_degree_) {
      std::ostringstream msg;
      msg << "HoloPolynomial: degree " << total_degree(alpha) << " exceeds cutoff " << max_degree_;
      throw TruncationError(msg.str());
    }
    if (c == Complex(0.0)) return;
    coeffs_[alpha] += c;
  }

  Complex coefficient(const MultiIndex& alpha) const {
    auto it = coeffs_.find(alpha);
    return it == coeffs_.end() ? Complex(0.0) : it->second;
  }

  BiPolynomial as_bipolynomial() const {
    BiPolynomial p(n_);
    const MultiIndex zero(n_, 0);
    for (const auto& [a, c] : coeffs_) p.add_term(a, zero, c);
    return p;
  }

private:
  int n_;
  int max_degree_;
  std::map<MultiIndex, Complex> coeffs_;
};

}  // namespace quantcurv
