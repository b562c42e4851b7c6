#pragma once

// Plane algebraic curves bounding a domain, seen through a linear projection l.
//
// Everything downstream works in "frame" coordinates (t, s) where t = l(x, y) = a x + b y
// and s = -b x + a y. The map (x, y) -> (t, s) scales areas by a^2 + b^2.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ovalmono/exact.hpp"
#include "ovalmono/upoly.hpp"

namespace ovalmono {

struct Monomial {
  int x_degree = 0;
  int y_degree = 0;
  Rational coeff;
};

/// Polynomial in x and y with exact rational coefficients; duplicates merged.
class BivariatePoly {
 public:
  BivariatePoly() = default;
  explicit BivariatePoly(const std::vector<Monomial>& monomials) {
    for (const auto& m : monomials) {
      if (m.x_degree < 0 || m.y_degree < 0) fail(ErrorKind::Input, "negative exponent");
      terms_[{m.x_degree, m.y_degree}] += m.coeff;
    }
    std::erase_if(terms_, [](const auto& kv) { return kv.second == 0; });
  }

  bool is_zero() const { return terms_.empty(); }
  const std::map<std::pair<int, int>, Rational>& terms() const { return terms_; }

  int total_degree() const {
    int d = 0;
    for (const auto& [k, v] : terms_) d = std::max(d, k.first + k.second);
    return d;
  }

  Rational operator()(const Rational& x, const Rational& y) const {
    Rational acc = 0;
    for (const auto& [k, c] : terms_) {
      Rational term = c;
      for (int i = 0; i < k.first; ++i) term *= x;
      for (int j = 0; j < k.second; ++j) term *= y;
      acc += term;
    }
    return acc;
  }

  std::vector<Monomial> monomials() const {
    std::vector<Monomial> out;
    for (const auto& [k, c] : terms_) out.push_back({k.first, k.second, c});
    return out;
  }

  friend BivariatePoly operator*(const BivariatePoly& a, const BivariatePoly& b) {
    std::vector<Monomial> out;
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_) out.push_back({ka.first + kb.first, ka.second + kb.second, ca * cb});
    return BivariatePoly(out);
  }
  friend bool operator==(const BivariatePoly&, const BivariatePoly&) = default;

 private:
  std::map<std::pair<int, int>, Rational> terms_;
};

/// The linear function l(x, y) = a x + b y together with the rotation-with-scaling that
/// sends it to the first frame coordinate.
struct DirectionFrame {
  Rational a = 1;
  Rational b = 0;

  Rational norm2() const { return a * a + b * b; }
  /// Area in the plane per unit area in frame coordinates.
  Rational area_scale() const { return Rational(1) / norm2(); }
  std::pair<Rational, Rational> to_frame(const Rational& x, const Rational& y) const {
    return {a * x + b * y, -b * x + a * y};
  }
  std::pair<Rational, Rational> from_frame(const Rational& t, const Rational& s) const {
    return {(a * t - b * s) / norm2(), (b * t + a * s) / norm2()};
  }
  bool valid() const { return norm2() != 0; }
};

struct DomainSpec {
  BivariatePoly f;
  Rational seed_x = 0;
  Rational seed_y = 0;
};

/// f written in frame coordinates: g(t, s) = sum_k sum_i c[k][i] s^k t^i.
class FramedCurve {
 public:
  FramedCurve() = default;
  FramedCurve(const BivariatePoly& f, const DirectionFrame& frame) : frame_(frame) {
    if (!frame.valid()) fail(ErrorKind::DegenerateDirection, "direction vector is zero");
    const int d = f.total_degree();
    // Dense bivariate arrays indexed [s_degree][t_degree].
    using Grid = std::vector<std::vector<Rational>>;
    auto zero_grid = [d] { return Grid(d + 1, std::vector<Rational>(d + 1, 0)); };
    auto mul = [&](const Grid& p, const Grid& q) {
      Grid r = zero_grid();
      for (int k1 = 0; k1 <= d; ++k1)
        for (int i1 = 0; i1 <= d; ++i1) {
          if (p[k1][i1] == 0) continue;
          for (int k2 = 0; k1 + k2 <= d; ++k2)
            for (int i2 = 0; i1 + i2 <= d; ++i2)
              if (q[k2][i2] != 0) r[k1 + k2][i1 + i2] += p[k1][i1] * q[k2][i2];
        }
      return r;
    };
    const Rational w = frame.norm2();
    Grid xg = zero_grid(), yg = zero_grid();
    if (d >= 1) {
      xg[0][1] = frame.a / w;   // x = (a t - b s) / w
      xg[1][0] = -frame.b / w;
      yg[0][1] = frame.b / w;   // y = (b t + a s) / w
      yg[1][0] = frame.a / w;
    }
    std::vector<Grid> xp{zero_grid()}, yp{zero_grid()};
    xp[0][0][0] = 1;
    yp[0][0][0] = 1;
    for (int e = 1; e <= d; ++e) {
      xp.push_back(mul(xp.back(), xg));
      yp.push_back(mul(yp.back(), yg));
    }
    Grid g = zero_grid();
    for (const auto& [key, c] : f.terms()) {
      Grid term = mul(xp[key.first], yp[key.second]);
      for (int k = 0; k <= d; ++k)
        for (int i = 0; i <= d; ++i) g[k][i] += c * term[k][i];
    }
    coeffs_ = std::move(g);
    while (!coeffs_.empty() && std::all_of(coeffs_.back().begin(), coeffs_.back().end(),
                                           [](const Rational& v) { return v == 0; }))
      coeffs_.pop_back();
  }

  const DirectionFrame& frame() const { return frame_; }
  int s_degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  int t_degree() const {
    int d = 0;
    for (const auto& row : coeffs_)
      for (int i = 0; i < static_cast<int>(row.size()); ++i)
        if (row[i] != 0) d = std::max(d, i);
    return d;
  }
  /// Coefficient of s^k as a polynomial in t.
  RationalPoly s_coefficient(int k) const {
    if (k < 0 || k > s_degree()) return {};
    return RationalPoly(coeffs_[k]);
  }
  const std::vector<std::vector<Rational>>& grid() const { return coeffs_; }

 private:
  DirectionFrame frame_;
  std::vector<std::vector<Rational>> coeffs_;
};

/// Resultant of g(t, .) and dg/ds(t, .) with respect to s, made primitive. Computed by
/// evaluating Sylvester determinants at integer t and interpolating exactly.
inline RationalPoly discriminant_t(const FramedCurve& curve) {
  const int n = curve.s_degree();
  if (n < 1) fail(ErrorKind::DegenerateDirection, "curve does not depend on the fiber coordinate");
  std::vector<RationalPoly> p(n + 1), q(n);
  for (int k = 0; k <= n; ++k) p[k] = curve.s_coefficient(k);
  for (int k = 0; k < n; ++k) q[k] = Rational(k + 1) * p[k + 1];
  const int m = n - 1;
  const int size = n + m;
  const int bound = size * std::max(1, curve.t_degree());
  std::vector<Rational> xs, ys;
  for (int x = 0; x <= bound; ++x) {
    Rational tx(x);
    std::vector<std::vector<Rational>> syl(size, std::vector<Rational>(size, 0));
    for (int r = 0; r < m; ++r)
      for (int k = 0; k <= n; ++k) syl[r][r + (n - k)] = p[k](tx);
    for (int r = 0; r < n; ++r)
      for (int k = 0; k <= m; ++k) syl[m + r][r + (m - k)] = q[k](tx);
    xs.push_back(tx);
    ys.push_back(determinant(std::move(syl)));
  }
  return interpolate(xs, ys).primitive();
}

// ---------------------------------------------------------------------------
// Numerical evaluation.

template <class T>
struct CurvePartials {
  T g, g_t, g_s, g_tt, g_ts, g_ss;
};

/// Floating-point copy of a framed curve for fast evaluation at real or complex points.
template <class Real>
class FiberPolynomial {
 public:
  using C = std::complex<Real>;

  FiberPolynomial() = default;
  explicit FiberPolynomial(const FramedCurve& curve) {
    for (const auto& row : curve.grid()) {
      std::vector<Real> r;
      for (const auto& v : row) r.push_back(to_real<Real>(v));
      while (!r.empty() && r.back() == Real(0)) r.pop_back();
      c_.push_back(std::move(r));
    }
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }

  /// Coefficients in s of g(t, .) and of dg/dt(t, .).
  template <class T>
  void coefficients_at(const T& t, std::vector<T>& cs, std::vector<T>* dcs = nullptr) const {
    cs.assign(c_.size(), T(0));
    if (dcs) dcs->assign(c_.size(), T(0));
    for (std::size_t k = 0; k < c_.size(); ++k) {
      T v(0), dv(0);
      for (auto it = c_[k].rbegin(); it != c_[k].rend(); ++it) {
        dv = dv * t + v;
        v = v * t + T(*it);
      }
      cs[k] = v;
      if (dcs) (*dcs)[k] = dv;
    }
  }

  template <class T>
  CurvePartials<T> partials(const T& t, const T& s) const {
    CurvePartials<T> r{T(0), T(0), T(0), T(0), T(0), T(0)};
    // Evaluate each s-coefficient and its t-derivatives, then Horner in s.
    const int n = degree();
    std::vector<T> a(n + 1), at(n + 1), att(n + 1);
    for (int k = 0; k <= n; ++k) {
      T v(0), dv(0), ddv(0);
      for (auto it = c_[k].rbegin(); it != c_[k].rend(); ++it) {
        ddv = ddv * t + T(2) * dv;
        dv = dv * t + v;
        v = v * t + T(*it);
      }
      a[k] = v;
      at[k] = dv;
      att[k] = ddv;
    }
    for (int k = n; k >= 0; --k) {
      r.g_ss = r.g_ss * s + T(2) * r.g_s;
      r.g_s = r.g_s * s + r.g;
      r.g = r.g * s + a[k];
      r.g_ts = r.g_ts * s + r.g_t;
      r.g_t = r.g_t * s + at[k];
      r.g_tt = r.g_tt * s + att[k];
    }
    return r;
  }

  /// All roots s of g(t, s) = 0, sorted by (Re, Im).
  std::vector<C> roots(const C& t, Real tol = Real(1e-14)) const {
    std::vector<C> cs;
    coefficients_at(t, cs);
    using std::abs;
    Real scale(0);
    for (const auto& v : cs) scale = std::max(scale, Real(abs(v)));
    if (abs(cs.back()) <= Real(1e-13) * scale)
      fail(ErrorKind::DegreeDrop, "leading fiber coefficient vanishes: a root escapes to infinity");
    auto r = polynomial_roots<Real>(cs, tol);
    std::sort(r.begin(), r.end(), [](const C& x, const C& y) {
      if (x.real() != y.real()) return x.real() < y.real();
      return x.imag() < y.imag();
    });
    return r;
  }

 private:
  std::vector<std::vector<Real>> c_;  // c_[k][i]: s^k t^i
};

// ---------------------------------------------------------------------------
// Oval tracing and critical data.

struct FramePoint {
  double t = 0;
  double s = 0;
};

/// Point of the selected oval where l restricted to the oval is critical.
struct OvalCriticalPoint {
  double t = 0;
  double s = 0;
  /// +1 local minimum of l along the oval, -1 local maximum.
  int kind = 0;
  /// |d^2 t / d s^2| along the curve; zero means a degenerate critical point.
  double curvature = 0;
};

struct OvalTrace {
  std::vector<FramePoint> points;  // closed polyline, first point not repeated
  double length = 0;
  double max_step = 0;
  std::vector<OvalCriticalPoint> critical_points;  // sorted by t

  double t_min() const {
    double v = std::numeric_limits<double>::infinity();
    for (const auto& p : points) v = std::min(v, p.t);
    return v;
  }
  double t_max() const {
    double v = -std::numeric_limits<double>::infinity();
    for (const auto& p : points) v = std::max(v, p.t);
    return v;
  }
  double diameter() const {
    double t0 = t_min(), t1 = t_max();
    double s0 = std::numeric_limits<double>::infinity(), s1 = -s0;
    for (const auto& p : points) {
      s0 = std::min(s0, p.s);
      s1 = std::max(s1, p.s);
    }
    return std::hypot(t1 - t0, s1 - s0);
  }

  /// Euclidean distance from (t, s) to the polyline.
  double distance_to(double t, double s) const {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = points.size();
    for (std::size_t i = 0; i < n; ++i) {
      const auto& p = points[i];
      const auto& q = points[(i + 1) % n];
      double dt = q.t - p.t, ds = q.s - p.s;
      double len2 = dt * dt + ds * ds;
      double u = len2 > 0 ? ((t - p.t) * dt + (s - p.s) * ds) / len2 : 0.0;
      u = std::clamp(u, 0.0, 1.0);
      best = std::min(best, std::hypot(t - p.t - u * dt, s - p.s - u * ds));
    }
    return best;
  }
};

struct CurveConfig {
  /// Root isolation precision for the discriminant and fibers.
  double root_tol = 1e-12;
  /// Largest oval trace step; 0 picks 1% of the initial seed-to-curve distance scale.
  double trace_max_step = 0;
  /// Largest turning angle (radians) between consecutive trace tangents.
  double trace_max_angle = 0.02;
};

namespace detail {

inline void refine_critical_point(const FiberPolynomial<double>& g, double& t, double& s) {
  // Newton on (g, g_s) = 0.
  for (int it = 0; it < 50; ++it) {
    auto p = g.partials(t, s);
    double j11 = p.g_t, j12 = p.g_s, j21 = p.g_ts, j22 = p.g_ss;
    double det = j11 * j22 - j12 * j21;
    if (det == 0) break;
    double dt = (p.g * j22 - j12 * p.g_s) / det;
    double ds = (j11 * p.g_s - j21 * p.g) / det;
    t -= dt;
    s -= ds;
    if (std::hypot(dt, ds) < 1e-15 * std::max(1.0, std::hypot(t, s))) break;
  }
}

}  // namespace detail

/// Traces the real oval met first by the ray from the seed in the +s direction.
inline OvalTrace trace_oval(const FiberPolynomial<double>& g, FramePoint seed, const CurveConfig& cfg = {}) {
  auto seed_val = g.partials(seed.t, seed.s).g;
  if (seed_val == 0) fail(ErrorKind::Input, "seed lies on the curve");
  auto fiber = g.roots(std::complex<double>(seed.t, 0.0));
  std::optional<double> hit;
  for (const auto& r : fiber) {
    if (std::abs(r.imag()) > 1e-9 * std::max(1.0, std::abs(r))) continue;
    if (r.real() > seed.s && (!hit || r.real() < *hit)) hit = r.real();
  }
  if (!hit) fail(ErrorKind::Input, "no curve point above the seed: seed is not inside a bounded oval");
  FramePoint start{seed.t, *hit};
  {
    double t = start.t, s = start.s;
    for (int it = 0; it < 20; ++it) {
      auto p = g.partials(t, s);
      double n2 = p.g_t * p.g_t + p.g_s * p.g_s;
      if (n2 == 0) fail(ErrorKind::Genericity, "singular curve point on the selected oval");
      t -= p.g * p.g_t / n2;
      s -= p.g * p.g_s / n2;
    }
    start = {t, s};
  }
  const double d0 = std::hypot(start.t - seed.t, start.s - seed.s);
  const double hmax = cfg.trace_max_step > 0 ? cfg.trace_max_step : 0.01 * std::max(0.05, d0);
  auto tangent = [&](FramePoint p) {
    auto d = g.partials(p.t, p.s);
    double n = std::hypot(d.g_t, d.g_s);
    if (n == 0) fail(ErrorKind::Genericity, "singular curve point on the selected oval");
    return std::array<double, 2>{d.g_s / n, -d.g_t / n};
  };
  auto tan0 = tangent(start);
  double orient = tan0[0] < 0 ? 1.0 : -1.0;  // counter-clockwise around the seed
  auto oriented_tangent = [&](FramePoint p) {
    auto v = tangent(p);
    return std::array<double, 2>{orient * v[0], orient * v[1]};
  };

  OvalTrace tr;
  tr.max_step = hmax;
  tr.points.push_back(start);
  FramePoint cur = start;
  auto tcur = oriented_tangent(cur);
  double h = hmax * 0.25;
  double travelled = 0;
  const std::size_t max_steps = 2'000'000;
  for (std::size_t step = 0;; ++step) {
    if (step > max_steps) fail(ErrorKind::Construction, "oval trace did not close");
    FramePoint pred{cur.t + h * tcur[0], cur.s + h * tcur[1]};
    FramePoint corr = pred;
    bool ok = false;
    for (int it = 0; it < 12; ++it) {
      auto d = g.partials(corr.t, corr.s);
      double n2 = d.g_t * d.g_t + d.g_s * d.g_s;
      if (n2 == 0) break;
      double dt = d.g * d.g_t / n2, ds = d.g * d.g_s / n2;
      corr.t -= dt;
      corr.s -= ds;
      if (std::hypot(dt, ds) < 1e-14 * std::max(1.0, std::hypot(corr.t, corr.s))) {
        ok = true;
        break;
      }
    }
    std::array<double, 2> tnew{};
    if (ok) {
      tnew = oriented_tangent(corr);
      double cosang = tnew[0] * tcur[0] + tnew[1] * tcur[1];
      double corr_dist = std::hypot(corr.t - pred.t, corr.s - pred.s);
      if (cosang < std::cos(cfg.trace_max_angle) || corr_dist > 0.2 * h) ok = false;
    }
    if (!ok) {
      h *= 0.5;
      if (h < 1e-12 * std::max(1.0, d0)) fail(ErrorKind::Construction, "oval trace step underflow");
      continue;
    }
    // Closing test: does the accepted chord pass the start point?
    double seg_t = corr.t - cur.t, seg_s = corr.s - cur.s;
    double len = std::hypot(seg_t, seg_s);
    if (travelled > 4 * hmax && len > 0) {
      double u = ((start.t - cur.t) * seg_t + (start.s - cur.s) * seg_s) / (len * len);
      double dist = std::hypot(start.t - cur.t - u * seg_t, start.s - cur.s - u * seg_s);
      if (u > -0.5 && u <= 1.0 && dist < 0.25 * std::max(len, 1e-3 * hmax)) {
        tr.length = travelled + std::hypot(start.t - cur.t, start.s - cur.s);
        break;
      }
    }
    travelled += len;
    cur = corr;
    tcur = tnew;
    tr.points.push_back(cur);
    if (std::hypot(cur.t, cur.s) > 1e6) fail(ErrorKind::Input, "curve component through the seed is unbounded");
    h = std::min(hmax, h * 1.5);
  }

  // Local extrema of t along the closed polyline.
  const std::size_t n = tr.points.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& prev = tr.points[(i + n - 1) % n];
    const auto& here = tr.points[i];
    const auto& next = tr.points[(i + 1) % n];
    double d1 = here.t - prev.t, d2 = next.t - here.t;
    bool is_min = d1 < 0 && d2 >= 0;
    bool is_max = d1 > 0 && d2 <= 0;
    if (!is_min && !is_max) continue;
    double t = here.t, s = here.s;
    detail::refine_critical_point(g, t, s);
    auto d = g.partials(t, s);
    OvalCriticalPoint cp{t, s, 0, d.g_t != 0 ? std::abs(d.g_ss / d.g_t) : 0.0};
    cp.kind = (d.g_t != 0 && -d.g_ss / d.g_t > 0) ? +1 : -1;
    if (cp.curvature == 0) cp.kind = is_min ? +1 : -1;
    bool dup = false;
    for (const auto& q : tr.critical_points)
      if (std::hypot(q.t - cp.t, q.s - cp.s) < 1e-9 * std::max(1.0, d0)) dup = true;
    if (!dup) tr.critical_points.push_back(cp);
  }
  std::sort(tr.critical_points.begin(), tr.critical_points.end(),
            [](const auto& a, const auto& b) { return a.t < b.t; });
  return tr;
}

struct CriticalValue {
  std::complex<double> t;
  int multiplicity = 1;
  bool is_real = false;
  bool on_oval = false;
  /// For oval critical values: the fiber coordinate of the critical point and whether
  /// it is a local minimum (+1) or maximum (-1) of l along the oval.
  double s = 0;
  int kind = 0;
  double curvature = 0;
};

struct CriticalData {
  RationalPoly discriminant;
  /// All roots of the discriminant, sorted by (Re, Im).
  std::vector<CriticalValue> values;
  /// Indices into `values` of the oval critical values, by increasing t.
  std::vector<std::size_t> oval;
  double m = 0;
  double M = 0;

  std::vector<std::complex<double>> branch_points() const {
    std::vector<std::complex<double>> out;
    for (const auto& v : values) out.push_back(v.t);
    return out;
  }
  std::vector<double> oval_values() const {
    std::vector<double> out;
    for (auto i : oval) out.push_back(values[i].t.real());
    return out;
  }
  std::vector<double> real_values() const {
    std::vector<double> out;
    for (const auto& v : values)
      if (v.is_real) out.push_back(v.t.real());
    return out;
  }
};

struct GenericityReport {
  bool passed = true;
  std::vector<std::string> issues;
};

/// A domain spec analysed in a fixed direction frame: the framed curve, its numeric
/// copy, the traced boundary oval and the critical data.
class PlaneDomain {
 public:
  PlaneDomain(DomainSpec spec, DirectionFrame frame, CurveConfig cfg = {})
      : spec_(std::move(spec)), cfg_(cfg), curve_(spec_.f, frame), numeric_(curve_) {
    if (spec_.f.is_zero()) fail(ErrorKind::Input, "zero polynomial");
    if (spec_.f(spec_.seed_x, spec_.seed_y) == 0) fail(ErrorKind::Input, "seed lies on the curve");
    disc_ = discriminant_t(curve_);
    if (disc_.is_zero())
      fail(ErrorKind::Genericity, "discriminant vanishes identically: defining polynomial is not square-free");
    auto [ts, ss] = frame.to_frame(spec_.seed_x, spec_.seed_y);
    seed_ = {to_real<double>(ts), to_real<double>(ss)};
    oval_ = trace_oval(numeric_, seed_, cfg_);
    build_critical_data();
  }

  const DomainSpec& spec() const { return spec_; }
  const DirectionFrame& frame() const { return curve_.frame(); }
  const CurveConfig& config() const { return cfg_; }
  const FramedCurve& curve() const { return curve_; }
  const FiberPolynomial<double>& numeric() const { return numeric_; }
  const OvalTrace& oval() const { return oval_; }
  const CriticalData& critical() const { return critical_; }
  FramePoint seed() const { return seed_; }
  double area_scale() const { return to_real<double>(frame().area_scale()); }
  double scale() const { return std::max(1e-3, oval_.diameter()); }

  std::vector<std::complex<double>> fiber_roots(std::complex<double> t) const { return numeric_.roots(t, 1e-15); }

  /// Real fiber roots lying on the selected oval, ascending.
  std::vector<double> oval_crossings(double t) const {
    std::vector<double> out;
    const double tol = 2e-4 * scale() + 10 * oval_.max_step * cfg_.trace_max_angle;
    for (const auto& r : fiber_roots({t, 0.0})) {
      if (std::abs(r.imag()) > 1e-7 * std::max(1.0, std::abs(r))) continue;
      if (oval_.distance_to(t, r.real()) < tol) out.push_back(r.real());
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  void build_critical_data() {
    critical_.discriminant = disc_;
    auto factors = squarefree_factors(disc_);
    for (std::size_t k = 0; k < factors.size(); ++k) {
      for (auto r : isolate_roots(factors[k], cfg_.root_tol)) {
        CriticalValue v;
        v.t = r;
        v.multiplicity = static_cast<int>(k + 1);
        v.is_real = r.imag() == 0.0;
        critical_.values.push_back(v);
      }
    }
    std::sort(critical_.values.begin(), critical_.values.end(), [](const auto& a, const auto& b) {
      if (a.t.real() != b.t.real()) return a.t.real() < b.t.real();
      return a.t.imag() < b.t.imag();
    });
    const double tol = 1e-6 * scale();
    for (const auto& cp : oval_.critical_points) {
      std::optional<std::size_t> best;
      double bestd = tol;
      for (std::size_t i = 0; i < critical_.values.size(); ++i) {
        const auto& v = critical_.values[i];
        if (!v.is_real) continue;
        double d = std::abs(v.t.real() - cp.t);
        if (d < bestd) {
          bestd = d;
          best = i;
        }
      }
      if (!best)
        fail(ErrorKind::Genericity, "oval critical point at t=" + std::to_string(cp.t) +
                                        " has no matching real discriminant root");
      auto& v = critical_.values[*best];
      if (v.on_oval)
        fail(ErrorKind::Genericity, "two oval critical points share the critical value t=" + std::to_string(cp.t));
      if (v.multiplicity > 1)
        fail(ErrorKind::Genericity, "oval critical value t=" + std::to_string(cp.t) +
                                        " is a multiple root of the discriminant");
      v.on_oval = true;
      v.s = cp.s;
      v.kind = cp.kind;
      v.curvature = cp.curvature;
      critical_.oval.push_back(*best);
    }
    if (critical_.oval.size() < 2) fail(ErrorKind::Genericity, "fewer than two critical values on the oval");
    std::sort(critical_.oval.begin(), critical_.oval.end(), [&](auto i, auto j) {
      return critical_.values[i].t.real() < critical_.values[j].t.real();
    });
    critical_.m = critical_.values[critical_.oval.front()].t.real();
    critical_.M = critical_.values[critical_.oval.back()].t.real();
  }

  DomainSpec spec_;
  CurveConfig cfg_;
  FramedCurve curve_;
  FiberPolynomial<double> numeric_;
  RationalPoly disc_;
  FramePoint seed_;
  OvalTrace oval_;
  CriticalData critical_;
};

/// Critical data of l restricted to the selected oval.
inline CriticalData critical_values(const DomainSpec& spec, const DirectionFrame& frame, const CurveConfig& cfg = {}) {
  return PlaneDomain(spec, frame, cfg).critical();
}

inline RationalPoly discriminant_t(const BivariatePoly& f, const DirectionFrame& frame) {
  return discriminant_t(FramedCurve(f, frame));
}

/// Strict-Morse test of l on the selected oval: nondegenerate critical points, distinct
/// critical values, each a simple root of the discriminant.
inline GenericityReport genericity_check(const DomainSpec& spec, const DirectionFrame& frame, const CurveConfig& cfg = {}) {
  GenericityReport rep;
  try {
    PlaneDomain dom(spec, frame, cfg);
    const auto& cd = dom.critical();
    const double scale = dom.scale();
    for (auto i : cd.oval) {
      const auto& v = cd.values[i];
      if (v.curvature < 1e-8 / scale) {
        rep.passed = false;
        rep.issues.push_back("degenerate critical point at t=" + std::to_string(v.t.real()));
      }
    }
    auto vals = cd.oval_values();
    for (std::size_t k = 1; k < vals.size(); ++k)
      if (vals[k] - vals[k - 1] < 1e-9 * scale) {
        rep.passed = false;
        rep.issues.push_back("critical values not distinct near t=" + std::to_string(vals[k]));
      }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Genericity && e.kind() != ErrorKind::DegenerateDirection &&
        e.kind() != ErrorKind::Construction)
      throw;
    rep.passed = false;
    rep.issues.push_back(e.what());
  }
  return rep;
}

/// The given frame if generic, otherwise the first of 16 deterministic rational
/// rotations of it that passes the genericity check.
inline DirectionFrame choose_generic_frame(const DomainSpec& spec, const DirectionFrame& frame, const CurveConfig& cfg = {}) {
  if (genericity_check(spec, frame, cfg).passed) return frame;
  // Rotations by angles with rational half-angle tangent u: (1-u^2, 2u) / (1+u^2).
  std::uint32_t state = 0x9e3779b9u;
  for (int attempt = 0; attempt < 16; ++attempt) {
    state = state * 1664525u + 1013904223u;
    int num = 1 + static_cast<int>((state >> 8) % 19);  // 1..19
    int sign = (state >> 4) & 1 ? 1 : -1;
    Rational u(sign * num, 40);
    Rational c = 1 - u * u, s = 2 * u;
    DirectionFrame rotated{frame.a * c - frame.b * s, frame.a * s + frame.b * c};
    if (genericity_check(spec, rotated, cfg).passed) return rotated;
  }
  fail(ErrorKind::Genericity, "no generic direction found among 16 rotations");
}

inline std::vector<std::complex<double>> fiber_roots(const PlaneDomain& dom, std::complex<double> t) {
  return dom.fiber_roots(t);
}

struct SliceInterval {
  double lower = 0;
  double upper = 0;
  double width() const { return upper - lower; }
};

/// Intervals of the line l = t inside the domain bounded by the selected oval, in the
/// fiber coordinate s. Empty outside (m, M).
inline std::vector<SliceInterval> real_slice(const PlaneDomain& dom, double t) {
  const auto& cd = dom.critical();
  if (!(t > cd.m && t < cd.M)) return {};
  auto xs = dom.oval_crossings(t);
  std::vector<SliceInterval> out;
  for (std::size_t k = 0; k + 1 < xs.size(); k += 2) out.push_back({xs[k], xs[k + 1]});
  return out;
}

}  // namespace ovalmono
