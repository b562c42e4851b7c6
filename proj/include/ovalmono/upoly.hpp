#pragma once

// Univariate polynomials: exact arithmetic over Q and numerical root isolation.

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "ovalmono/exact.hpp"

namespace ovalmono {

/// Dense polynomial with rational coefficients, coefficient k multiplies x^k.
/// The zero polynomial has an empty coefficient vector.
class RationalPoly {
 public:
  RationalPoly() = default;
  explicit RationalPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }
  static RationalPoly constant(const Rational& v) { return RationalPoly({v}); }
  static RationalPoly monomial(const Rational& v, std::size_t k) {
    std::vector<Rational> c(k + 1);
    c[k] = v;
    return RationalPoly(std::move(c));
  }

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational coeff(std::size_t k) const { return k < c_.size() ? c_[k] : Rational(0); }
  Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }

  Rational operator()(const Rational& x) const {
    Rational acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  RationalPoly derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<Rational> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<int>(k);
    return RationalPoly(std::move(d));
  }

  friend RationalPoly operator+(const RationalPoly& a, const RationalPoly& b) {
    std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = a.coeff(k) + b.coeff(k);
    return RationalPoly(std::move(c));
  }
  friend RationalPoly operator-(const RationalPoly& a, const RationalPoly& b) {
    std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = a.coeff(k) - b.coeff(k);
    return RationalPoly(std::move(c));
  }
  friend RationalPoly operator*(const RationalPoly& a, const RationalPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> c(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return RationalPoly(std::move(c));
  }
  friend RationalPoly operator*(const Rational& s, const RationalPoly& a) {
    std::vector<Rational> c = a.c_;
    for (auto& v : c) v *= s;
    return RationalPoly(std::move(c));
  }
  friend bool operator==(const RationalPoly& a, const RationalPoly& b) { return a.c_ == b.c_; }

  /// Euclidean division; throws on division by zero.
  static std::pair<RationalPoly, RationalPoly> divmod(const RationalPoly& num, const RationalPoly& den) {
    if (den.is_zero()) fail(ErrorKind::Input, "polynomial division by zero");
    std::vector<Rational> r = num.c_;
    int dn = den.degree();
    if (num.degree() < dn) return {RationalPoly{}, num};
    std::vector<Rational> q(num.degree() - dn + 1);
    for (int k = num.degree() - dn; k >= 0; --k) {
      Rational f = r[k + dn] / den.leading();
      q[k] = f;
      for (int i = 0; i <= dn; ++i) r[k + i] -= f * den.c_[i];
    }
    r.resize(dn);
    return {RationalPoly(std::move(q)), RationalPoly(std::move(r))};
  }

  RationalPoly monic() const {
    if (is_zero()) return {};
    return Rational(1) / leading() * *this;
  }

  /// Scales to integer coefficients with unit content and positive leading coefficient.
  RationalPoly primitive() const {
    if (is_zero()) return {};
    BigInt den = 1;
    for (const auto& v : c_) den = lcm(den, denominator(v));
    BigInt g = 0;
    for (const auto& v : c_) g = gcd(g, numerator(v * den));
    Rational scale(den, g);
    if (leading() < 0) scale = -scale;
    return scale * *this;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Rational> c_;
};

inline RationalPoly gcd(RationalPoly a, RationalPoly b) {
  while (!b.is_zero()) {
    auto r = RationalPoly::divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

/// Yun's square-free factorisation: returns factors[k-1] whose roots have multiplicity k.
inline std::vector<RationalPoly> squarefree_factors(const RationalPoly& p) {
  std::vector<RationalPoly> out;
  if (p.degree() < 1) return out;
  RationalPoly d = p.derivative();
  RationalPoly a = gcd(p, d);
  RationalPoly b = RationalPoly::divmod(p, a).first;
  RationalPoly c = RationalPoly::divmod(d, a).first;
  RationalPoly e = c - b.derivative();
  while (b.degree() >= 1) {
    RationalPoly f = gcd(b, e);
    out.push_back(f);
    b = RationalPoly::divmod(b, f).first;
    c = RationalPoly::divmod(e, f).first;
    e = c - b.derivative();
  }
  while (!out.empty() && out.back().degree() < 1) out.pop_back();
  return out;
}

/// Lagrange interpolation through (x_k, y_k) with distinct x_k, exact.
inline RationalPoly interpolate(std::span<const Rational> xs, std::span<const Rational> ys) {
  // Newton divided differences.
  std::vector<Rational> dd(ys.begin(), ys.end());
  const std::size_t n = xs.size();
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = n - 1; i >= j; --i) {
      dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);
      if (i == j) break;
    }
  RationalPoly result = RationalPoly::constant(dd[n - 1]);
  for (std::size_t k = n - 1; k-- > 0;) {
    result = result * RationalPoly({-xs[k], Rational(1)}) + RationalPoly::constant(dd[k]);
  }
  return result;
}

/// Determinant of a square rational matrix (row-major), Gaussian elimination.
inline Rational determinant(std::vector<std::vector<Rational>> a) {
  const std::size_t n = a.size();
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != col) {
      std::swap(a[piv], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a[r][col] == 0) continue;
      Rational f = a[r][col] / a[col][col];
      for (std::size_t k = col; k < n; ++k) a[r][k] -= f * a[col][k];
    }
  }
  return det;
}

// ---------------------------------------------------------------------------
// Numerical root finding.

/// Horner evaluation of p and p' at z; coefficients low to high.
template <class C>
std::pair<C, C> horner_with_derivative(std::span<const C> coeffs, const C& z) {
  C p(0), dp(0);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    dp = dp * z + p;
    p = p * z + *it;
  }
  return {p, dp};
}

/// All complex roots of a polynomial by Aberth-Ehrlich iteration followed by Newton
/// polishing. Coefficients are low to high; the leading coefficient must be nonzero.
template <class Real>
std::vector<std::complex<Real>> polynomial_roots(std::span<const std::complex<Real>> coeffs,
                                                 Real tol = Real(1e-14), int max_iter = 500) {
  using C = std::complex<Real>;
  using std::abs;
  using std::pow;
  const int n = static_cast<int>(coeffs.size()) - 1;
  if (n < 1) return {};
  if (abs(coeffs[n]) == Real(0)) fail(ErrorKind::DegreeDrop, "leading coefficient vanishes");
  if (n == 1) return {-coeffs[0] / coeffs[1]};

  // Initial guesses on a circle of the Fujiwara-type radius.
  Real radius(0);
  for (int k = 0; k < n; ++k) {
    Real r = pow(abs(coeffs[k] / coeffs[n]), Real(1) / Real(n - k));
    if (r > radius) radius = r;
  }
  if (radius == Real(0)) return std::vector<C>(n, C(0));
  std::vector<C> z(n);
  const Real two_pi = Real(2) * boost::math::constants::pi<Real>();
  for (int k = 0; k < n; ++k) {
    Real ang = two_pi * Real(k) / Real(n) + Real(0.4);
    z[k] = std::polar(radius, ang);
  }

  std::vector<bool> done(n, false);
  for (int iter = 0; iter < max_iter; ++iter) {
    bool all_done = true;
    for (int k = 0; k < n; ++k) {
      if (done[k]) continue;
      auto [p, dp] = horner_with_derivative<C>(coeffs, z[k]);
      if (abs(p) == Real(0)) {
        done[k] = true;
        continue;
      }
      C ratio = p / dp;
      C sum(0);
      for (int j = 0; j < n; ++j)
        if (j != k) sum += C(1) / (z[k] - z[j]);
      C w = ratio / (C(1) - ratio * sum);
      z[k] -= w;
      if (abs(w) <= tol * std::max(Real(1), abs(z[k])))
        done[k] = true;
      else
        all_done = false;
    }
    if (all_done) break;
  }
  // Newton polish; harmless for multiple roots since steps are bounded by the ratio size.
  for (auto& r : z) {
    for (int it = 0; it < 3; ++it) {
      auto [p, dp] = horner_with_derivative<C>(coeffs, r);
      if (abs(dp) == Real(0)) break;
      C step = p / dp;
      if (!(abs(step) < Real(1e-3) * std::max(Real(1), abs(r)))) break;
      r -= step;
    }
  }
  return z;
}

/// Roots of a rational polynomial in double precision with a real-root refinement pass:
/// roots with |Im| below `real_tol` (relative) are snapped to the real axis and polished
/// by bisection-safeguarded Newton on the exact polynomial.
inline std::vector<std::complex<double>> isolate_roots(const RationalPoly& p, double tol = 1e-12) {
  if (p.degree() < 1) return {};
  // Normalise for conditioning.
  RationalPoly q = p.monic();
  std::vector<std::complex<double>> c(q.coeffs().size());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = to_real<double>(q.coeffs()[k]);
  auto roots = polynomial_roots<double>(c, 1e-15);
  std::vector<std::complex<long double>> cl(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) cl[k] = to_real<long double>(q.coeffs()[k]);
  for (auto& r : roots) {
    std::complex<long double> z = r;
    for (int it = 0; it < 4; ++it) {
      auto [v, dv] = horner_with_derivative<std::complex<long double>>(cl, z);
      if (std::abs(dv) == 0.0L) break;
      auto step = v / dv;
      if (!(std::abs(step) < 1e-3L * std::max(1.0L, std::abs(z)))) break;
      z -= step;
    }
    r = std::complex<double>(static_cast<double>(z.real()), static_cast<double>(z.imag()));
    const double scale = std::max(1.0, std::abs(r));
    if (std::abs(r.imag()) < std::sqrt(tol) * scale) {
      // Is there a sign change of the real polynomial nearby?
      double x = r.real();
      double h = std::max(1e-9 * scale, 100 * std::abs(r.imag()));
      auto ev = [&](double xx) { return static_cast<double>(horner_with_derivative<std::complex<long double>>(cl, std::complex<long double>(xx)).first.real()); };
      double lo = x - h, hi = x + h;
      double flo = ev(lo), fhi = ev(hi);
      if (flo == 0.0) { r = lo; continue; }
      if (fhi == 0.0) { r = hi; continue; }
      if ((flo < 0) != (fhi < 0)) {
        for (int it = 0; it < 200 && hi - lo > tol * 1e-3 * scale; ++it) {
          double mid = 0.5 * (lo + hi);
          double fm = ev(mid);
          if (fm == 0.0) { lo = hi = mid; break; }
          if ((fm < 0) == (flo < 0)) { lo = mid; flo = fm; } else { hi = mid; }
        }
        r = std::complex<double>(0.5 * (lo + hi), 0.0);
      }
    }
  }
  std::sort(roots.begin(), roots.end(), [](auto a, auto b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return roots;
}

}  // namespace ovalmono
