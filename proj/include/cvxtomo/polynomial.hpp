#pragma once

// Dense univariate polynomials over any field-like scalar (double or an exact
// rational type), and real-root extraction through the companion matrix.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace cvxtomo {

template <typename Scalar>
class Polynomial {
public:
  Polynomial() = default;
  // c[i] is the coefficient of t^i.
  explicit Polynomial(std::vector<Scalar> c) : c_(std::move(c)) { trim(); }

  static Polynomial constant(const Scalar& s) { return Polynomial(std::vector<Scalar>{s}); }
  static Polynomial monomial(const Scalar& s, std::size_t degree) {
    std::vector<Scalar> c(degree + 1, Scalar(0));
    c[degree] = s;
    return Polynomial(std::move(c));
  }

  bool is_zero() const { return c_.empty(); }
  // -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Scalar>& coeffs() const { return c_; }
  Scalar coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Scalar(0); }
  Scalar leading() const { return c_.empty() ? Scalar(0) : c_.back(); }

  template <typename T>
  T operator()(const T& t) const {
    T acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + T(*it);
    return acc;
  }

  Polynomial derivative() const {
    std::vector<Scalar> d;
    for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * Scalar(static_cast<long>(i)));
    return Polynomial(std::move(d));
  }

  friend Polynomial operator+(const Polynomial& p, const Polynomial& q) {
    std::vector<Scalar> c(std::max(p.c_.size(), q.c_.size()), Scalar(0));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = p.coeff(i) + q.coeff(i);
    return Polynomial(std::move(c));
  }
  friend Polynomial operator-(const Polynomial& p, const Polynomial& q) { return p + Scalar(-1) * q; }
  friend Polynomial operator*(const Scalar& s, const Polynomial& p) {
    std::vector<Scalar> c = p.c_;
    for (auto& x : c) x = x * s;
    return Polynomial(std::move(c));
  }
  friend Polynomial operator*(const Polynomial& p, const Polynomial& q) {
    if (p.is_zero() || q.is_zero()) return {};
    std::vector<Scalar> c(p.c_.size() + q.c_.size() - 1, Scalar(0));
    for (std::size_t i = 0; i < p.c_.size(); ++i)
      for (std::size_t j = 0; j < q.c_.size(); ++j) c[i + j] += p.c_[i] * q.c_[j];
    return Polynomial(std::move(c));
  }

  Polynomial pow(unsigned e) const {
    Polynomial out = constant(Scalar(1)), base = *this;
    for (; e; e >>= 1) {
      if (e & 1u) out = out * base;
      base = base * base;
    }
    return out;
  }

  // p(q(t))
  Polynomial compose(const Polynomial& q) const {
    Polynomial out;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) out = out * q + constant(*it);
    return out;
  }

private:
  void trim() {
    while (!c_.empty() && c_.back() == Scalar(0)) c_.pop_back();
  }
  std::vector<Scalar> c_;
};

template <typename To, typename From>
Polynomial<To> convert(const Polynomial<From>& p) {
  std::vector<To> c;
  for (const auto& x : p.coeffs()) c.push_back(static_cast<To>(x));
  return Polynomial<To>(std::move(c));
}

// All complex roots as eigenvalues of the companion matrix of the monic
// normalization, each polished by a few complex Newton steps.
inline std::vector<std::complex<double>> complex_roots(const Polynomial<double>& p) {
  if (p.is_zero()) throw std::invalid_argument("complex_roots: zero polynomial");
  const int d = p.degree();
  std::vector<std::complex<double>> out;
  if (d < 1) return out;
  // Factor out t^z for exact zero low-order coefficients.
  int z = 0;
  while (p.coeff(static_cast<std::size_t>(z)) == 0.0) ++z;
  for (int i = 0; i < z; ++i) out.emplace_back(0.0, 0.0);
  const int e = d - z;
  if (e < 1) return out;
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(e, e);
  const double lead = p.leading();
  for (int i = 0; i < e; ++i) companion(0, i) = -p.coeff(static_cast<std::size_t>(d - 1 - i)) / lead;
  for (int i = 1; i < e; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
  const Polynomial<double> dp = p.derivative();
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    std::complex<double> r = es.eigenvalues()(i);
    for (int it = 0; it < 8; ++it) {
      const std::complex<double> f = p(r), g = dp(r);
      if (std::abs(g) == 0.0) break;
      const std::complex<double> next = r - f / g;
      if (!std::isfinite(next.real()) || !std::isfinite(next.imag())) break;
      if (std::abs(p(next)) > std::abs(f)) break;
      r = next;
    }
    out.push_back(r);
  }
  return out;
}

// Real roots whose imaginary part is at most imag_tol * max(1, |root|), ascending.
inline std::vector<double> real_roots(const Polynomial<double>& p, double imag_tol = 1e-9) {
  std::vector<double> out;
  for (const auto& r : complex_roots(p))
    if (std::abs(r.imag()) <= imag_tol * std::max(1.0, std::abs(r))) out.push_back(r.real());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace cvxtomo
