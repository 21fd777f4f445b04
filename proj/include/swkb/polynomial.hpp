#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <numbers>
#include <sstream>
#include <vector>

#include <Eigen/Core>

#include "swkb/errors.hpp"

namespace swkb {

// Dense polynomial with complex coefficients in ascending degree.
template <typename Scalar = double>
class Polynomial {
public:
  using Complex = std::complex<Scalar>;
  using Coeffs = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

  Polynomial() : c_(Coeffs::Zero(1)) {}
  explicit Polynomial(Coeffs c) : c_(std::move(c)) { trim(); }
  Polynomial(std::initializer_list<Complex> c) : c_(static_cast<Eigen::Index>(c.size())) {
    Eigen::Index k = 0;
    for (const auto& v : c) c_(k++) = v;
    if (c_.size() == 0) c_ = Coeffs::Zero(1);
    trim();
  }

  static Polynomial constant(Complex v) { return Polynomial{v}; }
  static Polynomial monomial(int k, Complex v = Complex(1)) {
    Coeffs c = Coeffs::Zero(k + 1);
    c(k) = v;
    return Polynomial(std::move(c));
  }
  // (y - r)
  static Polynomial linear_factor(Complex r) { return Polynomial{-r, Complex(1)}; }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.size() == 1 && c_(0) == Complex(0); }
  const Coeffs& coeffs() const { return c_; }
  Complex operator[](int k) const { return k <= degree() ? c_(k) : Complex(0); }
  Complex leading() const { return c_(degree()); }
  Scalar max_abs_coeff() const { return c_.cwiseAbs().maxCoeff(); }

  template <typename T>
  auto operator()(const T& y) const {
    using R = decltype(Complex() * y);
    R acc = R(c_(degree()));
    for (int k = degree() - 1; k >= 0; --k) acc = acc * y + R(c_(k));
    return acc;
  }

  // Value and first derivative by Horner.
  void eval_with_derivative(Complex y, Complex& p, Complex& dp) const {
    p = c_(degree());
    dp = Complex(0);
    for (int k = degree() - 1; k >= 0; --k) {
      dp = dp * y + p;
      p = p * y + c_(k);
    }
  }

  // Sum |a_k| |y|^k, the rounding scale of a Horner evaluation at y.
  Scalar magnitude_at(Complex y) const {
    Scalar r = std::abs(y), acc = std::abs(c_(degree()));
    for (int k = degree() - 1; k >= 0; --k) acc = acc * r + std::abs(c_(k));
    return acc;
  }

  Polynomial& operator+=(const Polynomial& o) {
    const Eigen::Index n = std::max(c_.size(), o.c_.size());
    Coeffs c = Coeffs::Zero(n);
    c.head(c_.size()) = c_;
    c.head(o.c_.size()) += o.c_;
    c_ = std::move(c);
    trim();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) { return *this += -o; }
  Polynomial& operator*=(Complex s) {
    c_ *= s;
    trim();
    return *this;
  }
  Polynomial operator-() const { return Polynomial(Coeffs(-c_)); }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, Complex s) { return a *= s; }
  friend Polynomial operator*(Complex s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Coeffs c = Coeffs::Zero(a.degree() + b.degree() + 1);
    for (int i = 0; i <= a.degree(); ++i)
      for (int j = 0; j <= b.degree(); ++j) c(i + j) += a.c_(i) * b.c_(j);
    return Polynomial(std::move(c));
  }

private:
  void trim() {
    Eigen::Index n = c_.size();
    while (n > 1 && c_(n - 1) == Complex(0)) --n;
    c_.conservativeResize(n);
  }

  Coeffs c_;
};

template <typename Scalar>
Polynomial<Scalar> derivative(const Polynomial<Scalar>& p) {
  using Coeffs = typename Polynomial<Scalar>::Coeffs;
  if (p.degree() == 0) return Polynomial<Scalar>();
  Coeffs c(p.degree());
  for (int k = 1; k <= p.degree(); ++k) c(k - 1) = p[k] * Scalar(k);
  return Polynomial<Scalar>(std::move(c));
}

// Quotient of p by (y - r); the remainder is dropped.
template <typename Scalar>
Polynomial<Scalar> deflate(const Polynomial<Scalar>& p, std::complex<Scalar> r) {
  using Coeffs = typename Polynomial<Scalar>::Coeffs;
  const int n = p.degree();
  if (n == 0) return Polynomial<Scalar>();
  Coeffs q(n);
  std::complex<Scalar> acc = p[n];
  for (int k = n - 1; k >= 0; --k) {
    q(k) = acc;
    acc = p[k] + acc * r;
  }
  return Polynomial<Scalar>(std::move(q));
}

template <typename Scalar>
std::ostream& operator<<(std::ostream& os, const Polynomial<Scalar>& p) {
  for (int k = 0; k <= p.degree(); ++k) os << (k ? " + " : "") << p[k] << "*y^" << k;
  return os;
}

struct RootOptions {
  double tol = 1e-10;  // relative backward-error bound on |p(r)|
  int max_iter = 600;
};

namespace detail {

// Bini's starting points: circles whose radii come from the upper convex hull
// of (k, log|a_k|).
template <typename Scalar>
std::vector<std::complex<Scalar>> aberth_start(const Polynomial<Scalar>& p) {
  const int n = p.degree();
  std::vector<int> idx;
  std::vector<Scalar> lg;
  for (int k = 0; k <= n; ++k)
    if (std::abs(p[k]) > 0) {
      idx.push_back(k);
      lg.push_back(std::log(std::abs(p[k])));
    }
  std::vector<int> hull;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    while (hull.size() >= 2) {
      const int a = hull[hull.size() - 2], b = hull.back();
      const Scalar cross = (idx[b] - idx[a]) * (lg[i] - lg[a]) - (lg[b] - lg[a]) * (idx[i] - idx[a]);
      if (cross >= 0) hull.pop_back(); else break;
    }
    hull.push_back(static_cast<int>(i));
  }
  std::vector<std::complex<Scalar>> z;
  const Scalar two_pi = 2 * std::numbers::pi_v<Scalar>;
  for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
    const int k0 = idx[hull[h]], k1 = idx[hull[h + 1]], m = k1 - k0;
    const Scalar u = std::exp((lg[hull[h]] - lg[hull[h + 1]]) / m);
    for (int j = 0; j < m; ++j) {
      const Scalar th = two_pi * j / m + two_pi * h / n + Scalar(0.4);
      z.push_back(std::polar(u, th));
    }
  }
  return z;
}

}  // namespace detail

// All roots with multiplicity, by Aberth-Ehrlich simultaneous iteration and a
// final Newton polish against the undeflated polynomial.
template <typename Scalar>
std::vector<std::complex<Scalar>> find_roots(const Polynomial<Scalar>& p, RootOptions opt = {}) {
  using C = std::complex<Scalar>;
  if (p.is_zero()) throw DomainError("find_roots: polynomial is identically zero");
  std::vector<C> roots;
  int lo = 0;
  while (lo < p.degree() && p[lo] == C(0)) {
    roots.push_back(C(0));
    ++lo;
  }
  typename Polynomial<Scalar>::Coeffs c = p.coeffs().segment(lo, p.degree() + 1 - lo);
  const Polynomial<Scalar> q(c);
  const int n = q.degree();
  if (n == 0) return roots;

  std::vector<C> z = detail::aberth_start(q);
  std::vector<bool> done(n, false);
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  int active = n;
  for (int it = 0; it < opt.max_iter && active > 0; ++it) {
    for (int i = 0; i < n; ++i) {
      if (done[i]) continue;
      C v, dv;
      q.eval_with_derivative(z[i], v, dv);
      if (std::abs(v) <= 4 * eps * q.magnitude_at(z[i])) {
        done[i] = true;
        --active;
        continue;
      }
      const C ratio = v / dv;
      C s(0);
      for (int j = 0; j < n; ++j)
        if (j != i) s += C(1) / (z[i] - z[j]);
      const C w = ratio / (C(1) - ratio * s);
      z[i] -= w;
      if (std::abs(w) <= 4 * eps * std::abs(z[i])) {
        done[i] = true;
        --active;
      }
    }
  }

  for (auto& r : z) {
    for (int k = 0; k < 3; ++k) {
      C v, dv;
      q.eval_with_derivative(r, v, dv);
      if (dv == C(0)) break;
      const C cand = r - v / dv;
      if (std::abs(q(cand)) < std::abs(v)) r = cand; else break;
    }
  }

  std::vector<Scalar> residual;
  bool ok = true;
  for (const auto& r : z) {
    const Scalar rel = std::abs(q(r)) / q.magnitude_at(r);
    residual.push_back(rel);
    if (!(rel <= opt.tol)) ok = false;
  }
  if (!ok) {
    std::ostringstream msg;
    msg << "find_roots: no convergence, relative residuals:";
    for (auto r : residual) msg << ' ' << r;
    throw ConvergenceError(msg.str());
  }
  roots.insert(roots.end(), z.begin(), z.end());
  return roots;
}

// num/den with common roots (within tol_gcd) cancelled on construction.
template <typename Scalar = double>
class RationalFunction {
public:
  using Complex = std::complex<Scalar>;

  RationalFunction() : num_(), den_{Complex(1)} {}
  RationalFunction(Polynomial<Scalar> num, Polynomial<Scalar> den, double tol_gcd = 1e-9)
      : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw DomainError("RationalFunction: zero denominator");
    reduce(tol_gcd);
  }

  const Polynomial<Scalar>& num() const { return num_; }
  const Polynomial<Scalar>& den() const { return den_; }

  template <typename T>
  auto operator()(const T& y) const { return num_(y) / den_(y); }

  // Exact derivative (quotient rule), not reduced further.
  RationalFunction derivative() const {
    RationalFunction d;
    d.num_ = swkb::derivative(num_) * den_ - num_ * swkb::derivative(den_);
    d.den_ = den_ * den_;
    return d;
  }

private:
  void reduce(double tol_gcd) {
    if (num_.is_zero()) {
      den_ = Polynomial<Scalar>{Complex(1)};
      return;
    }
    if (num_.degree() == 0 || den_.degree() == 0) return;
    auto rn = find_roots(num_);
    auto rd = find_roots(den_);
    for (const auto& d : rd) {
      auto it = std::min_element(rn.begin(), rn.end(), [&](const Complex& a, const Complex& b) {
        return std::abs(a - d) < std::abs(b - d);
      });
      if (it == rn.end()) break;
      if (std::abs(*it - d) <= tol_gcd * std::max<Scalar>(1, std::abs(d))) {
        const Complex r = (*it + d) / Scalar(2);
        num_ = swkb::deflate(num_, r);
        den_ = swkb::deflate(den_, r);
        rn.erase(it);
      }
    }
  }

  Polynomial<Scalar> num_;
  Polynomial<Scalar> den_;
};

}  // namespace swkb
