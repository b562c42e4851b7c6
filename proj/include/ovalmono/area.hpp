#pragma once

// The cut-area function V(t) = area of D ∩ {l <= t}, its analytic continuation along
// paths of regular parameters, and the big loops whose monodromy shifts V by twice the
// total area.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ovalmono/curve.hpp"
#include "ovalmono/path.hpp"
#include "ovalmono/tracking.hpp"

namespace ovalmono {

// ---------------------------------------------------------------------------
// Direct quadrature.

inline double slice_width(const PlaneDomain& dom, double t) {
  double w = 0;
  for (const auto& iv : real_slice(dom, t)) w += iv.width();
  return w;
}

/// V(t) by adaptive quadrature of the slice width over [m, t]. Each stretch between
/// consecutive oval critical values is mapped by a cosine substitution, which removes the
/// square-root endpoint behaviour. Outside [m, M] the value clamps to 0 or the total
/// area, and `notice` (if given) says so.
inline double area_direct(const PlaneDomain& dom, double t, std::string* notice = nullptr) {
  const auto& cd = dom.critical();
  if (notice) notice->clear();
  if (t <= cd.m) {
    if (notice && t < cd.m) *notice = "t below m: clamped to 0";
    return 0.0;
  }
  const bool clamp_top = t > cd.M;
  if (clamp_top && notice) *notice = "t above M: clamped to the total area";
  const double top = std::min(t, cd.M);
  auto vals = cd.oval_values();
  std::vector<double> cuts{cd.m};
  for (double v : vals)
    if (v > cd.m && v < top) cuts.push_back(v);
  cuts.push_back(top);
  using boost::math::quadrature::gauss_kronrod;
  double total = 0;
  for (std::size_t k = 1; k < cuts.size(); ++k) {
    const double a = cuts[k - 1], b = cuts[k];
    if (!(b > a)) continue;
    auto integrand = [&](double th) {
      double x = a + (b - a) * 0.5 * (1 - std::cos(th));
      return slice_width(dom, x) * 0.5 * (b - a) * std::sin(th);
    };
    double err = 0;
    total += gauss_kronrod<double, 31>::integrate(integrand, 0.0, std::numbers::pi, 12, 1e-13, &err);
  }
  return total * dom.area_scale();
}

inline double total_area(const PlaneDomain& dom) { return area_direct(dom, dom.critical().M); }

// ---------------------------------------------------------------------------
// Germs.

/// A germ of the continued area function: the value at t together with the integer
/// 0-cycle (coefficients over the fiber roots, in fiber order) whose coordinate sum is
/// dV/dt up to the area scale.
struct AreaGerm {
  Complex t;
  Complex value;
  FiberState<double> fiber;
  std::vector<int> cycle;

  /// Positions (plus, minus) when the cycle is a single signed pair.
  std::optional<std::pair<int, int>> pair() const {
    int plus = -1, minus = -1, nonzero = 0;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      if (cycle[i] == 0) continue;
      ++nonzero;
      if (cycle[i] == 1) plus = static_cast<int>(i);
      if (cycle[i] == -1) minus = static_cast<int>(i);
    }
    if (nonzero == 2 && plus >= 0 && minus >= 0) return std::make_pair(plus, minus);
    return std::nullopt;
  }
};

/// Sorts the fiber by (Re, Im), treating real parts within `tol` as equal, and carries
/// the cycle along.
inline void canonicalize(AreaGerm& g, double tol = 1e-9) {
  const std::size_t n = g.fiber.roots.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  const auto& r = g.fiber.roots;
  std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
    if (std::abs(r[i].real() - r[j].real()) > tol * std::max(1.0, std::abs(r[i]))) return r[i].real() < r[j].real();
    return r[i].imag() < r[j].imag();
  });
  FiberState<double> f;
  f.t = g.fiber.t;
  std::vector<int> c;
  for (auto i : idx) {
    f.roots.push_back(g.fiber.roots[i]);
    f.labels.push_back(g.fiber.labels[i]);
    c.push_back(g.cycle[i]);
  }
  g.fiber = std::move(f);
  g.cycle = std::move(c);
}

/// The real germ at t in (m, M): V(t) with the cycle (+1 at each slice's upper end, -1 at
/// its lower end).
inline AreaGerm initial_germ(const PlaneDomain& dom, double t) {
  const auto& cd = dom.critical();
  if (!(t > cd.m && t < cd.M)) fail(ErrorKind::Input, "germ base point must lie in (m, M)");
  for (const auto& v : cd.values)
    if (std::abs(v.t - Complex(t, 0.0)) < 1e-9 * dom.scale()) fail(ErrorKind::Input, "germ base point is a branch point");
  AreaGerm g;
  g.t = {t, 0.0};
  g.value = {area_direct(dom, t), 0.0};
  g.fiber = make_fiber<double>(dom.numeric(), g.t);
  g.cycle.assign(g.fiber.roots.size(), 0);
  auto match = [&](double s) {
    int best = -1;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < g.fiber.roots.size(); ++i) {
      double d = std::abs(g.fiber.roots[i] - Complex(s, 0.0));
      if (d < bd) {
        bd = d;
        best = static_cast<int>(i);
      }
    }
    return best;
  };
  for (const auto& iv : real_slice(dom, t)) {
    g.cycle[match(iv.upper)] += 1;
    g.cycle[match(iv.lower)] -= 1;
  }
  return g;
}

struct ContinueResult {
  AreaGerm germ;
  std::vector<TrackSample> samples;  // integral increments along the path
  std::size_t steps = 0;
  double max_residual = 0;
};

namespace detail {

inline void check_cycle_clearance(const PlaneDomain& dom, const ComplexPath& path, const TrackingConfig& cfg) {
  const auto bps = dom.critical().branch_points();
  const double need = safety_radius(bps, cfg);
  for (auto i : dom.critical().oval) {
    const Complex b = dom.critical().values[i].t;
    if (path.clearance({b}) < need * (1 - 1e-9))
      fail(ErrorKind::VanishingCycleCrossing,
           "path meets the oval critical value t=" + std::to_string(b.real()) + " where slice endpoints collide");
  }
}

template <class Real>
ContinueResult continue_with(const PlaneDomain& dom, const FiberPolynomial<Real>& g, const AreaGerm& germ,
                             const ComplexPath& path, const TrackingConfig& cfg, bool record) {
  using C = std::complex<Real>;
  if (!path.empty() && std::abs(path.start() - germ.t) > 1e-9 * std::max(1.0, std::abs(germ.t)))
    fail(ErrorKind::Input, "germ is not based at the path start");
  check_cycle_clearance(dom, path, cfg);
  FiberState<Real> st;
  st.t = C(Real(germ.t.real()), Real(germ.t.imag()));
  for (const auto& r : germ.fiber.roots) st.roots.push_back(C(Real(r.real()), Real(r.imag())));
  st.labels = germ.fiber.labels;
  if constexpr (!std::is_same_v<Real, double>) {
    // Polish the double roots to working precision.
    std::vector<C> cs, dcs;
    g.coefficients_at(st.t, cs, &dcs);
    for (auto& y : st.roots)
      for (int it = 0; it < 12; ++it) {
        C v(0), d(0);
        for (std::size_t k = cs.size(); k-- > 0;) {
          d = d * y + v;
          v = v * y + cs[k];
        }
        y -= v / d;
      }
  }
  TrackOptions opt;
  opt.branch_points = dom.critical().branch_points();
  opt.cycle = germ.cycle;
  opt.record_samples = record;
  auto res = track_fiber<Real>(g, path, st, cfg, opt);
  ContinueResult out;
  out.germ = germ;
  const double J = dom.area_scale();
  auto to_c = [](const C& z) { return Complex(static_cast<double>(z.real()), static_cast<double>(z.imag())); };
  out.germ.t = path.empty() ? germ.t : path.end();
  out.germ.value = germ.value + J * to_c(res.integral);
  out.germ.fiber.t = out.germ.t;
  out.germ.fiber.roots.clear();
  for (const auto& r : res.end.roots) out.germ.fiber.roots.push_back(to_c(r));
  out.germ.fiber.labels = res.end.labels;
  for (auto& s : res.samples) s.integral = germ.value + J * s.integral;
  out.samples = std::move(res.samples);
  out.steps = res.steps;
  out.max_residual = res.max_residual;
  canonicalize(out.germ);
  return out;
}

}  // namespace detail

/// Continues the germ along the path, integrating dV/dt = J * (cycle coordinate sum) with
/// the tracked fiber. precision_bits > 53 switches to multiprecision arithmetic.
inline ContinueResult area_continue_detailed(const PlaneDomain& dom, const AreaGerm& germ, const ComplexPath& path,
                                             const TrackingConfig& cfg = {}, bool record = false) {
  if (cfg.precision_bits <= 53) return detail::continue_with<double>(dom, dom.numeric(), germ, path, cfg, record);
  using boost::multiprecision::mpfr_float;
  const unsigned digits = static_cast<unsigned>(std::ceil(cfg.precision_bits * 0.30103)) + 1;
  mpfr_float::default_precision(digits);
  FiberPolynomial<mpfr_float> g(dom.curve());
  return detail::continue_with<mpfr_float>(dom, g, germ, path, cfg, record);
}

inline AreaGerm area_continue(const PlaneDomain& dom, const AreaGerm& germ, const ComplexPath& path,
                              const TrackingConfig& cfg = {}) {
  return area_continue_detailed(dom, germ, path, cfg).germ;
}

// ---------------------------------------------------------------------------
// Loop programs.

enum class LoopAction { FullCircle, HalfCircleDetour, TurnBack };

inline const char* to_string(LoopAction a) {
  switch (a) {
    case LoopAction::FullCircle: return "full-circle";
    case LoopAction::HalfCircleDetour: return "half-circle-detour";
    case LoopAction::TurnBack: return "turn-back";
  }
  return "?";
}

struct LoopAnnotation {
  double t = 0;
  LoopAction action = LoopAction::FullCircle;
};

enum class HalfPlane { Upper, Lower };

struct LoopProgram {
  double basepoint = 0;
  double nu = 0;
  ComplexPath path;
  std::vector<LoopAnnotation> annotations;
};

/// Appends a route along the real axis from `from` to `to`, replacing the diameter
/// around every real branch point in between by a half-circle of radius nu/2.
inline void real_route(ComplexPath& path, LoopProgram* prog, double from, double to,
                       const std::vector<Complex>& branch_points, double nu, HalfPlane side) {
  if (to == from) return;
  const double dir = to > from ? 1.0 : -1.0;
  std::vector<double> stops;
  for (const auto& b : branch_points) {
    if (b.imag() != 0.0) continue;
    double x = b.real();
    if ((x - from) * dir <= 0 || (to - x) * dir <= 0) continue;
    if (std::abs(x - from) < nu / 2 || std::abs(to - x) < nu / 2)
      fail(ErrorKind::Construction, "route endpoint within nu/2 of the branch point t=" + std::to_string(x));
    stops.push_back(x);
  }
  std::sort(stops.begin(), stops.end(), [&](double a, double b) { return (a - b) * dir < 0; });
  Complex cur(from, 0.0);
  for (double x : stops) {
    path.segment(cur, {x - dir * nu / 2, 0.0});
    // From x - dir*nu/2 to x + dir*nu/2 through x + i*nu/2 (upper) or x - i*nu/2 (lower).
    const double theta0 = dir > 0 ? std::numbers::pi : 0.0;
    const bool upper = side == HalfPlane::Upper;
    const double sweep = (dir > 0) == upper ? -std::numbers::pi : std::numbers::pi;
    path.arc({x, 0.0}, nu / 2, theta0, sweep);
    cur = {x + dir * nu / 2, 0.0};
    if (prog) prog->annotations.push_back({x, LoopAction::HalfCircleDetour});
  }
  path.segment(cur, {to, 0.0});
}

/// alpha(c): along the real axis from the basepoint to c -+ nu/2, once around c
/// counter-clockwise, and back along the same route.
inline LoopProgram alpha_loop(const CriticalData& cd, double basepoint, double c, double nu,
                              HalfPlane side = HalfPlane::Upper) {
  check_loop_inputs(cd, basepoint, nu);
  LoopProgram prog;
  prog.basepoint = basepoint;
  prog.nu = nu;
  const double near = c > basepoint ? c - nu / 2 : c + nu / 2;
  ComplexPath leg;
  real_route(leg, &prog, basepoint, near, cd.branch_points(), nu, side);
  prog.path = leg;
  prog.path.circle({c, 0.0}, {near, 0.0});
  prog.annotations.push_back({c, LoopAction::FullCircle});
  const auto detours = prog.annotations.size() - 1;
  prog.path.append(leg.reversed());
  for (std::size_t k = detours; k-- > 0;) prog.annotations.push_back(prog.annotations[k]);
  return prog;
}

/// Convex case (exactly two critical values on the oval): alpha(M) followed by alpha(m).
/// This order sends V to V + 2 Area.
inline LoopProgram convex_big_loop(const CriticalData& cd, double basepoint, double nu,
                                   HalfPlane side = HalfPlane::Upper) {
  if (cd.oval.size() != 2)
    fail(ErrorKind::Construction, "convex big loop needs exactly two critical values on the oval; use general_big_loop");
  auto first = alpha_loop(cd, basepoint, cd.M, nu, side);
  auto second = alpha_loop(cd, basepoint, cd.m, nu, side);
  first.path.append(second.path);
  first.annotations.insert(first.annotations.end(), second.annotations.begin(), second.annotations.end());
  return first;
}

// ---------------------------------------------------------------------------
// Matched-pair walk.

struct WalkEvent {
  double t = 0;
  /// FullCircle: the common value l(a) = l(b) reverses here. HalfCircleDetour: it passes
  /// a real branch point monotonically. TurnBack: the pair merges at M.
  LoopAction action = LoopAction::FullCircle;
};

struct PairWalk {
  std::vector<WalkEvent> events;
  /// Sampled (t, s_a, s_b) along the walk.
  std::vector<std::array<double, 3>> trace;
  std::size_t steps = 0;
};

/// Continues pairs (a, b) of oval points with l(a) = l(b) from the two crossings at
/// m + nu/2 until they merge at the global maximum M. Predictor-corrector in (t, s_a, s_b)
/// on g(t, s_a) = g(t, s_b) = 0 with arc-length steps.
inline PairWalk matched_pair_walk(const PlaneDomain& dom, double nu, const TrackingConfig& cfg = {}) {
  const auto& cd = dom.critical();
  const auto& g = dom.numeric();
  const double scale = dom.scale();
  const double t0 = cd.m + nu / 2;
  auto xs = dom.oval_crossings(t0);
  if (xs.size() != 2) fail(ErrorKind::Construction, "expected two oval crossings just above m");
  std::array<double, 3> x{t0, xs[1], xs[0]};
  PairWalk walk;
  walk.trace.push_back(x);

  auto tangent = [&](const std::array<double, 3>& p) {
    auto A = g.partials(p[0], p[1]);
    auto B = g.partials(p[0], p[2]);
    std::array<double, 3> v{A.g_s * B.g_s, -A.g_t * B.g_s, -A.g_s * B.g_t};
    double n = std::hypot(v[0], v[1], v[2]);
    if (n == 0) fail(ErrorKind::Construction, "matched-pair walk hit a singular point");
    for (auto& c : v) c /= n;
    return v;
  };
  auto dot = [](const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
  };
  auto T = tangent(x);
  if (T[0] < 0)
    for (auto& c : T) c = -c;

  const double hmax = std::max(cfg.max_step, 0.0) * scale * 0.2;
  const double hmin = cfg.min_step * scale;
  double h = std::min(hmax, 0.1 * nu);
  const std::size_t max_steps = 2000000;
  std::vector<double> tvals{t0};  // accepted t values
  std::vector<int> dirs{1};
  while (true) {
    if (walk.steps > max_steps) fail(ErrorKind::Construction, "matched-pair walk exceeded the step budget");
    std::array<double, 3> pred{x[0] + h * T[0], x[1] + h * T[1], x[2] + h * T[2]};
    std::array<double, 3> y = pred;
    bool ok = false;
    for (int it = 0; it < 8; ++it) {
      auto A = g.partials(y[0], y[1]);
      auto B = g.partials(y[0], y[2]);
      // Rows: dg(a), dg(b), tangent hyperplane.
      double M3[3][3] = {{A.g_t, A.g_s, 0}, {B.g_t, 0, B.g_s}, {T[0], T[1], T[2]}};
      double r[3] = {-A.g, -B.g, -(T[0] * (y[0] - pred[0]) + T[1] * (y[1] - pred[1]) + T[2] * (y[2] - pred[2]))};
      double det = M3[0][0] * (M3[1][1] * M3[2][2] - M3[1][2] * M3[2][1]) -
                   M3[0][1] * (M3[1][0] * M3[2][2] - M3[1][2] * M3[2][0]) +
                   M3[0][2] * (M3[1][0] * M3[2][1] - M3[1][1] * M3[2][0]);
      if (det == 0) break;
      double d[3];
      for (int c = 0; c < 3; ++c) {
        double Mc[3][3];
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) Mc[i][j] = j == c ? r[i] : M3[i][j];
        d[c] = (Mc[0][0] * (Mc[1][1] * Mc[2][2] - Mc[1][2] * Mc[2][1]) -
                Mc[0][1] * (Mc[1][0] * Mc[2][2] - Mc[1][2] * Mc[2][0]) +
                Mc[0][2] * (Mc[1][0] * Mc[2][1] - Mc[1][1] * Mc[2][0])) /
               det;
      }
      for (int c = 0; c < 3; ++c) y[c] += d[c];
      if (std::hypot(d[0], d[1], d[2]) < 1e-13 * scale) {
        ok = true;
        break;
      }
    }
    std::array<double, 3> Ty{};
    if (ok) {
      Ty = tangent(y);
      if (dot(Ty, T) < 0)
        for (auto& c : Ty) c = -c;
      // Small turning angle and no jump onto another branch.
      if (dot(Ty, T) < std::cos(0.1) || std::hypot(y[0] - pred[0], y[1] - pred[1], y[2] - pred[2]) > 0.1 * h) ok = false;
    }
    if (!ok) {
      h *= 0.5;
      if (h < hmin) fail(ErrorKind::Construction, "matched-pair walk step underflow near t=" + std::to_string(x[0]));
      continue;
    }
    x = y;
    T = Ty;
    ++walk.steps;
    walk.trace.push_back(x);
    tvals.push_back(x[0]);
    dirs.push_back(T[0] >= 0 ? 1 : -1);
    h = std::min(hmax, h * 1.5);
    if (x[0] >= cd.M - nu / 4 && T[0] > 0) break;
    if (x[0] <= cd.m + nu / 4 && T[0] < 0)
      fail(ErrorKind::Construction, "matched-pair walk returned to m without reaching M");
  }

  // Runs of monotone t; reversals are matched to oval critical values.
  auto vals = cd.oval_values();
  auto nearest_oval_value = [&](double t) {
    double best = vals.front();
    for (double v : vals)
      if (std::abs(v - t) < std::abs(best - t)) best = v;
    if (std::abs(best - t) > 0.25 * nu)
      fail(ErrorKind::Construction, "walk reversal at t=" + std::to_string(t) + " matches no oval critical value");
    return best;
  };
  std::vector<double> ends{t0};
  for (std::size_t k = 1; k + 1 < tvals.size(); ++k) {
    if (dirs[k] != dirs[k - 1]) {
      // Extremum of t along the run between k-1 and k+1.
      double ext = dirs[k - 1] > 0 ? std::max({tvals[k - 1], tvals[k], tvals[k + 1]})
                                   : std::min({tvals[k - 1], tvals[k], tvals[k + 1]});
      ends.push_back(nearest_oval_value(ext));
    }
  }
  ends.push_back(cd.M);
  for (std::size_t k = 1; k < ends.size(); ++k) {
    const double a = ends[k - 1], b = ends[k];
    const double lo = std::min(a, b), hi = std::max(a, b);
    std::vector<double> passed;
    for (const auto& v : cd.values)
      if (v.is_real && v.t.real() > lo && v.t.real() < hi) passed.push_back(v.t.real());
    std::sort(passed.begin(), passed.end());
    if (b < a) std::reverse(passed.begin(), passed.end());
    for (double p : passed) walk.events.push_back({p, LoopAction::HalfCircleDetour});
    walk.events.push_back({b, k + 1 == ends.size() ? LoopAction::TurnBack : LoopAction::FullCircle});
  }
  return walk;
}

/// The loop of the general construction: from tau = m + nu/2 follow the matched-pair walk
/// to M (full circles at reversals, half-circles at monotone passages), go once around M,
/// return along the same path, and finish with a circle around m.
inline LoopProgram general_big_loop(const PlaneDomain& dom, double nu, const TrackingConfig& cfg = {},
                                    HalfPlane side = HalfPlane::Upper) {
  const auto& cd = dom.critical();
  const double tau = cd.m + nu / 2;
  check_nu(cd, nu);
  auto walk = matched_pair_walk(dom, nu, cfg);
  LoopProgram prog;
  prog.basepoint = tau;
  prog.nu = nu;
  ComplexPath forward;
  std::vector<LoopAnnotation> fwd_notes;
  double cur = tau;
  const auto bps = cd.branch_points();
  for (const auto& e : walk.events) {
    if (e.action == LoopAction::HalfCircleDetour) continue;  // emitted by the route
    const double dir = e.t > cur ? 1.0 : -1.0;
    const double near = e.t - dir * nu / 2;
    LoopProgram notes;
    real_route(forward, &notes, cur, near, bps, nu, side);
    fwd_notes.insert(fwd_notes.end(), notes.annotations.begin(), notes.annotations.end());
    if (e.action == LoopAction::FullCircle) {
      forward.circle({e.t, 0.0}, {near, 0.0});
      fwd_notes.push_back({e.t, LoopAction::FullCircle});
    }
    cur = near;
  }
  prog.path = forward;
  prog.path.circle({cd.M, 0.0}, {cur, 0.0});
  prog.annotations = fwd_notes;
  prog.annotations.push_back({cd.M, LoopAction::TurnBack});
  prog.path.append(forward.reversed());
  for (auto it = fwd_notes.rbegin(); it != fwd_notes.rend(); ++it) prog.annotations.push_back(*it);
  prog.path.circle({cd.m, 0.0}, {tau, 0.0});
  prog.annotations.push_back({cd.m, LoopAction::FullCircle});
  return prog;
}

/// Germ values at the big loop's basepoint after 0, 1, ..., k traversals.
struct ShiftResult {
  LoopProgram loop;
  std::vector<Complex> values;
  std::vector<AreaGerm> germs;
};

inline ShiftResult monodromy_shift(const PlaneDomain& dom, int k, const TrackingConfig& cfg = {},
                                   std::optional<double> nu = std::nullopt, HalfPlane side = HalfPlane::Upper) {
  if (k < 0) fail(ErrorKind::Input, "iteration count must be non-negative");
  const auto& cd = dom.critical();
  const double n = nu ? *nu : default_nu(cd);
  ShiftResult out;
  out.loop = cd.oval.size() == 2 ? convex_big_loop(cd, cd.m + n / 2, n, side) : general_big_loop(dom, n, cfg, side);
  AreaGerm g = initial_germ(dom, out.loop.basepoint);
  out.values.push_back(g.value);
  out.germs.push_back(g);
  for (int i = 0; i < k; ++i) {
    g = area_continue(dom, g, out.loop.path, cfg);
    out.values.push_back(g.value);
    out.germs.push_back(g);
  }
  return out;
}

}  // namespace ovalmono
