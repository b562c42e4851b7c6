#pragma once

// Transport of fiber roots along paths of regular parameter values, and the
// permutation monodromy of closed loops.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ovalmono/curve.hpp"
#include "ovalmono/path.hpp"

namespace ovalmono {

struct TrackingConfig {
  double initial_step = 0.01;
  double min_step = 1e-10;
  double max_step = 0.05;
  /// Newton convergence threshold, relative to max(1, |y|).
  double newton_tol = 1e-12;
  int max_newton_iters = 8;
  /// Scales the default safety radius (a tenth of the smallest branch point spacing).
  double safety_factor = 1.0;
  /// Significand bits; 53 means double precision.
  unsigned precision_bits = 53;

  void validate() const {
    if (!(min_step > 0 && min_step <= initial_step && initial_step <= max_step))
      fail(ErrorKind::Input, "tracking steps must satisfy 0 < min <= initial <= max");
    if (!(newton_tol > 0)) fail(ErrorKind::Input, "newton tolerance must be positive");
    if (max_newton_iters < 1) fail(ErrorKind::Input, "max_newton_iters must be positive");
    if (!(safety_factor > 0 && safety_factor < 1.0 + 1e-12))
      fail(ErrorKind::Input, "safety factor must lie in (0, 1]");
  }
};

/// Root configuration over a parameter value. roots[i] carries labels[i]; transport keeps
/// positions, so labels stay attached to their tracked roots.
template <class Real>
struct FiberState {
  std::complex<Real> t;
  std::vector<std::complex<Real>> roots;
  std::vector<int> labels;
};

template <class Real>
FiberState<Real> make_fiber(const FiberPolynomial<Real>& g, std::complex<Real> t) {
  FiberState<Real> st;
  st.t = t;
  using std::max;
  st.roots = g.roots(t, max(Real(std::numeric_limits<Real>::epsilon() * 64), Real(1e-30)));
  st.labels.resize(st.roots.size());
  std::iota(st.labels.begin(), st.labels.end(), 0);
  return st;
}

struct TrackSample {
  Complex t;
  Complex integral;
};

template <class Real>
struct TrackResult {
  FiberState<Real> end;
  /// Integral of sum_k cycle[k] * y_k(t) dt along the path (zero without a cycle).
  std::complex<Real> integral{Real(0), Real(0)};
  std::size_t steps = 0;
  std::size_t rejected = 0;
  double max_residual = 0;
  double min_root_separation = std::numeric_limits<double>::infinity();
  std::vector<TrackSample> samples;
};

/// Default safety radius: a tenth of the smallest spacing between branch points.
inline double safety_radius(const std::vector<Complex>& branch_points, const TrackingConfig& cfg) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < branch_points.size(); ++i)
    for (std::size_t j = i + 1; j < branch_points.size(); ++j) d = std::min(d, std::abs(branch_points[i] - branch_points[j]));
  if (!std::isfinite(d)) d = 1.0;
  return 0.1 * d * cfg.safety_factor;
}

struct TrackOptions {
  /// Branch points; when given, steps are capped at a quarter of the distance to the
  /// nearest one and the path clearance is checked against the safety radius.
  std::vector<Complex> branch_points;
  /// Coefficients per root position of the 0-cycle whose coordinate sum is integrated.
  std::vector<int> cycle;
  bool record_samples = false;
  bool check_clearance = true;
};

namespace detail {

// 5-point Gauss-Legendre nodes and weights on [0, 1].
inline constexpr std::array<double, 5> kGlNodes = {0.046910077030668, 0.230765344947158, 0.5, 0.769234655052842,
                                                   0.953089922969332};
inline constexpr std::array<long double, 5> kGlX = {-0.9061798459386639927976269L, -0.5384693101056830910363144L, 0.0L,
                                                    0.5384693101056830910363144L, 0.9061798459386639927976269L};
inline constexpr std::array<long double, 5> kGlW = {0.2369268850561890875142640L, 0.4786286704993664680412915L,
                                                    0.5688888888888888888888889L, 0.4786286704993664680412915L,
                                                    0.2369268850561890875142640L};

template <class Real>
Real to_double_abs(const std::complex<Real>& z) {
  using std::abs;
  return abs(z);
}

}  // namespace detail

/// Predictor (Euler on the implicit derivative) - corrector (Newton) transport of every
/// fiber root along `path`, optionally integrating a 0-cycle's coordinate sum with
/// 5-point Gauss-Legendre panels on each accepted step.
template <class Real>
TrackResult<Real> track_fiber(const FiberPolynomial<Real>& g, const ComplexPath& path, const FiberState<Real>& start,
                              const TrackingConfig& cfg, const TrackOptions& opt = {}) {
  using C = std::complex<Real>;
  using std::abs;
  cfg.validate();
  const std::size_t n = start.roots.size();
  if (static_cast<int>(n) != g.degree()) fail(ErrorKind::Input, "fiber state has the wrong number of roots");
  if (!opt.cycle.empty() && opt.cycle.size() != n) fail(ErrorKind::Input, "cycle length differs from fiber size");
  TrackResult<Real> res;
  res.end = start;
  if (path.empty()) return res;
  {
    Complex s0 = path.start();
    Complex st(static_cast<double>(start.t.real()), static_cast<double>(start.t.imag()));
    if (std::abs(s0 - st) > 1e-9 * std::max(1.0, std::abs(s0)))
      fail(ErrorKind::Input, "fiber state is not over the path start");
  }
  if (!opt.branch_points.empty() && opt.check_clearance) {
    double need = safety_radius(opt.branch_points, cfg);
    double have = path.clearance(opt.branch_points);
    if (have < need * (1 - 1e-9))  // the safety radius itself is allowed
      fail(ErrorKind::Tracking, "path passes within " + std::to_string(have) + " of a branch point (safety radius " +
                                    std::to_string(need) + ")");
  }

  const Real tol(cfg.newton_tol);
  auto& roots = res.end.roots;
  std::vector<C> cs, dcs;
  auto coeffs_at = [&](const C& t) { g.coefficients_at(t, cs, &dcs); };
  auto eval = [&](const C& y, C& val, C& dy, C& dt) {
    val = C(0);
    dy = C(0);
    dt = C(0);
    for (std::size_t k = cs.size(); k-- > 0;) {
      dy = dy * y + val;
      val = val * y + cs[k];
      dt = dt * y + dcs[k];
    }
  };
  const bool integrate = !opt.cycle.empty();
  C integral(0);

  auto nearest_branch = [&](const Complex& t) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& b : opt.branch_points) d = std::min(d, std::abs(b - t));
    return d;
  };
  auto to_c = [](const C& z) { return Complex(static_cast<double>(z.real()), static_cast<double>(z.imag())); };

  if (opt.record_samples) res.samples.push_back({to_c(res.end.t), Complex(0)});

  double h = cfg.initial_step;
  std::vector<C> slope0(n), slope1(n), pred(n), corr(n);
  for (const auto& piece : path.pieces()) {
    const double L = piece_length(piece);
    if (L == 0) continue;
    Real u(0);
    // Re-anchor the roots on this piece's start (piece junctions agree to rounding).
    {
      C t0 = piece_point<Real>(piece, Real(0));
      coeffs_at(t0);
      for (auto& y : roots)
        for (int it = 0; it < 3; ++it) {
          C v, dy, dt;
          eval(y, v, dy, dt);
          if (abs(dy) == Real(0)) break;
          y -= v / dy;
        }
      res.end.t = t0;
    }
    while (u < Real(1)) {
      C t0 = piece_point<Real>(piece, u);
      C v0 = piece_velocity<Real>(piece, u);
      double cap = cfg.max_step;
      if (!opt.branch_points.empty()) cap = std::min(cap, std::max(cfg.min_step, 0.25 * nearest_branch(to_c(t0))));
      h = std::min(h, cap);
      coeffs_at(t0);
      for (std::size_t i = 0; i < n; ++i) {
        C val, dy, dt;
        eval(roots[i], val, dy, dt);
        slope0[i] = -dt / dy * v0;  // dy/du
      }
      bool accepted = false;
      while (!accepted) {
        Real du = Real(h / L);
        if (u + du > Real(1)) du = Real(1) - u;
        C t1 = piece_point<Real>(piece, u + du);
        coeffs_at(t1);
        bool ok = true;
        int worst_iters = 0;
        for (std::size_t i = 0; i < n && ok; ++i) {
          pred[i] = roots[i] + du * slope0[i];
          C y = pred[i];
          bool conv = false;
          for (int it = 0; it < cfg.max_newton_iters; ++it) {
            C val, dy, dt;
            eval(y, val, dy, dt);
            if (abs(dy) == Real(0)) break;
            C step = val / dy;
            y -= step;
            if (abs(step) <= tol * std::max(Real(1), Real(abs(y)))) {
              conv = true;
              worst_iters = std::max(worst_iters, it + 1);
              break;
            }
          }
          corr[i] = y;
          ok = conv;
        }
        if (ok) {
          // Basin check: each correction small against the separation of the corrected
          // roots, and each corrected root nearest to its own prediction.
          double minsep = std::numeric_limits<double>::infinity();
          for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
              minsep = std::min(minsep, static_cast<double>(abs(corr[i] - corr[j])));
          for (std::size_t i = 0; i < n && ok; ++i) {
            double move = static_cast<double>(abs(corr[i] - pred[i]));
            if (4 * move > minsep) ok = false;
            for (std::size_t j = 0; j < n && ok; ++j)
              if (j != i && abs(corr[j] - pred[i]) <= abs(corr[i] - pred[i])) ok = false;
          }
          if (ok && minsep < 2 * cfg.newton_tol)
            fail(ErrorKind::Tracking, "path-jump suspicion: two roots within the Newton tolerance");
          if (ok) res.min_root_separation = std::min(res.min_root_separation, minsep);
        }
        if (!ok) {
          ++res.rejected;
          h *= 0.5;
          if (h < cfg.min_step) fail(ErrorKind::Tracking, "step size underflow while tracking");
          continue;
        }
        accepted = true;
        C v1 = piece_velocity<Real>(piece, u + du);
        double maxres = 0;
        for (std::size_t i = 0; i < n; ++i) {
          C val, dy, dt;
          eval(corr[i], val, dy, dt);
          slope1[i] = -dt / dy * v1;
          maxres = std::max(maxres, static_cast<double>(abs(val)));
        }
        res.max_residual = std::max(res.max_residual, maxres);
        if (integrate) {
          C acc(0);
          for (std::size_t q = 0; q < detail::kGlNodes.size(); ++q) {
            Real x = (Real(1) + Real(detail::kGlX[q])) / Real(2);
            Real uq = u + x * du;
            C tq = piece_point<Real>(piece, uq);
            C vq = piece_velocity<Real>(piece, uq);
            coeffs_at(tq);
            // Cubic Hermite prediction in u, then Newton polish.
            Real h00 = (Real(1) + Real(2) * x) * (Real(1) - x) * (Real(1) - x);
            Real h10 = x * (Real(1) - x) * (Real(1) - x);
            Real h01 = x * x * (Real(3) - Real(2) * x);
            Real h11 = x * x * (x - Real(1));
            C sum(0);
            for (std::size_t i = 0; i < n; ++i) {
              if (opt.cycle[i] == 0) continue;
              C y = h00 * roots[i] + Real(h10 * du) * slope0[i] + h01 * corr[i] + Real(h11 * du) * slope1[i];
              for (int it = 0; it < cfg.max_newton_iters; ++it) {
                C val, dy, dt;
                eval(y, val, dy, dt);
                C step = val / dy;
                y -= step;
                if (abs(step) <= tol * std::max(Real(1), Real(abs(y)))) break;
              }
              sum += Real(opt.cycle[i]) * y;
            }
            acc += Real(detail::kGlW[q]) * sum * vq;
          }
          integral += acc * du / Real(2);
        }
        roots = corr;
        u += du;
        res.end.t = t1;
        ++res.steps;
        if (opt.record_samples) res.samples.push_back({to_c(t1), to_c(integral)});
        if (worst_iters <= 3) h = std::min(cap, h * 1.5);
      }
    }
  }
  res.integral = integral;
  return res;
}

/// Permutation p with p[i] = j when the root starting at position i ends where root j
/// started. Concatenating loops a then b gives p_ab[i] = p_b[p_a[i]].
using Permutation = std::vector<int>;

inline Permutation compose_then(const Permutation& first, const Permutation& second) {
  Permutation r(first.size());
  for (std::size_t i = 0; i < first.size(); ++i) r[i] = second[first[i]];
  return r;
}

inline Permutation inverse(const Permutation& p) {
  Permutation r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[p[i]] = static_cast<int>(i);
  return r;
}

inline Permutation identity_permutation(std::size_t n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

/// Matches end positions of a closed transport to the start fiber.
template <class Real>
Permutation match_fibers(const std::vector<std::complex<Real>>& start, const std::vector<std::complex<Real>>& end) {
  using std::abs;
  const std::size_t n = start.size();
  Permutation p(n, -1);
  std::vector<bool> used(n, false);
  double minsep = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) minsep = std::min(minsep, static_cast<double>(abs(start[i] - start[j])));
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    int arg = -1;
    for (std::size_t j = 0; j < n; ++j) {
      double d = static_cast<double>(abs(end[i] - start[j]));
      if (d < best) {
        best = d;
        arg = static_cast<int>(j);
      }
    }
    if (arg < 0 || used[arg] || best > 1e-3 * minsep)
      fail(ErrorKind::Tracking, "transported fiber does not match the start fiber");
    used[arg] = true;
    p[i] = arg;
  }
  return p;
}

template <class Real>
Permutation loop_permutation(const FiberPolynomial<Real>& g, const ComplexPath& loop, const TrackingConfig& cfg,
                             const TrackOptions& opt = {}) {
  if (!loop.is_closed(1e-9)) fail(ErrorKind::Input, "loop is not closed");
  auto start = make_fiber<Real>(g, std::complex<Real>(Real(loop.start().real()), Real(loop.start().imag())));
  TrackOptions o = opt;
  o.cycle.clear();
  auto res = track_fiber<Real>(g, loop, start, cfg, o);
  return match_fibers<Real>(start.roots, res.end.roots);
}

// ---------------------------------------------------------------------------
// Loops around critical values.

/// Default loop radius scale: a quarter of the smallest distance between branch points
/// near the oval's critical segment [m, M].
inline double default_nu(const CriticalData& cd) {
  const double span = cd.M - cd.m;
  std::vector<Complex> near;
  for (const auto& v : cd.values) {
    double dre = std::max({0.0, cd.m - v.t.real(), v.t.real() - cd.M});
    if (std::hypot(dre, v.t.imag()) <= span) near.push_back(v.t);
  }
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < near.size(); ++i)
    for (std::size_t j = i + 1; j < near.size(); ++j) d = std::min(d, std::abs(near[i] - near[j]));
  return 0.25 * d;
}

/// Height of the horizontal run of the upper-half-plane paths: below every non-real
/// branch point over the working window and at most nu / 2.
inline double upper_corridor_height(const CriticalData& cd, double lo, double hi, double nu) {
  double eta = nu / 2;
  for (const auto& v : cd.values) {
    if (v.t.imag() <= 0) continue;
    if (v.t.real() < lo - nu || v.t.real() > hi + nu) continue;
    eta = std::min(eta, 0.5 * v.t.imag());
  }
  return eta;
}

/// Path from `basepoint` to `target` through the upper half-plane: up, across, down.
inline ComplexPath upper_path(double basepoint, double target, double eta) {
  ComplexPath p;
  p.segment({basepoint, 0.0}, {basepoint, eta});
  p.line_to({target, eta});
  p.line_to({target, 0.0});
  return p;
}

inline void check_nu(const CriticalData& cd, double nu) {
  if (!(nu > 0)) fail(ErrorKind::Input, "nu must be positive");
  auto vals = cd.oval_values();
  for (std::size_t k = 1; k < vals.size(); ++k)
    if (nu >= 0.5 * (vals[k] - vals[k - 1]))
      fail(ErrorKind::Input, "nu is not smaller than half the gap between critical values");
}

inline void check_loop_inputs(const CriticalData& cd, double basepoint, double nu) {
  check_nu(cd, nu);
  for (const auto& v : cd.values)
    if (std::abs(v.t - Complex(basepoint, 0.0)) < 0.5 * nu * (1 - 1e-9))
      fail(ErrorKind::Input, "basepoint lies on or next to a critical value");
}

/// For each oval critical value t_j (ascending): the upper-half-plane path from the
/// basepoint to t_j + nu/2, the counter-clockwise circle of radius nu/2 around t_j, and
/// the path back.
inline std::vector<ComplexPath> standard_loops(const CriticalData& cd, double basepoint, double nu) {
  check_loop_inputs(cd, basepoint, nu);
  auto vals = cd.oval_values();
  double lo = std::min(basepoint, vals.front()), hi = std::max(basepoint, vals.back());
  double eta = upper_corridor_height(cd, lo, hi, nu);
  std::vector<ComplexPath> loops;
  for (double tj : vals) {
    ComplexPath to = upper_path(basepoint, tj + nu / 2, eta);
    ComplexPath loop = to;
    loop.circle({tj, 0.0}, loop.end());
    loop.append(to.reversed());
    loops.push_back(std::move(loop));
  }
  return loops;
}

}  // namespace ovalmono
