#pragma once

// Vanishing 0-cycles of the fibers at the oval critical values, their intersection
// lattice, and the sign certificate that a signed sum of them lies in the kernel.

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "ovalmono/area.hpp"
#include "ovalmono/curve.hpp"
#include "ovalmono/lattice.hpp"
#include "ovalmono/tracking.hpp"

namespace ovalmono {

/// Signed 0-cycle on the base fiber, one integer coefficient per base label.
using ZeroCycle = std::vector<int>;

struct VanishingCycle0 {
  int plus_label = -1;
  int minus_label = -1;
  /// Critical value where the pair collides.
  double origin = 0;
  /// Index of the critical value among the oval critical values (ascending).
  std::size_t index = 0;
  /// "real-pair: upper - lower" or "complex-pair: larger Im - smaller Im", judged at
  /// origin + nu/2.
  std::string sign_convention;
  /// Ratio of the pair distance at origin + nu/2 to that at origin + nu/8 (2 for a
  /// square-root collision).
  double collision_ratio = 0;
  /// Positions of the pair in the fiber transported to origin + nu/2.
  int plus_position = -1;
  int minus_position = -1;

  ZeroCycle as_cycle(std::size_t fiber_size) const {
    ZeroCycle c(fiber_size, 0);
    c[plus_label] += 1;
    c[minus_label] -= 1;
    return c;
  }
};

/// Base point and loop scale shared by the cycle constructions.
struct BaseData {
  double basepoint = 0;
  double nu = 0;
  double eta = 0;  // height of the upper-half-plane corridor
  FiberState<double> fiber;  // labels 0..n-1 in (Re, Im) order
};

/// Midpoint of the widest gap between consecutive real branch points in (m, M), with m
/// and M as the outer ends.
inline double default_basepoint(const CriticalData& cd) {
  std::vector<double> xs{cd.m, cd.M};
  for (const auto& v : cd.values)
    if (v.is_real && v.t.real() > cd.m && v.t.real() < cd.M) xs.push_back(v.t.real());
  std::sort(xs.begin(), xs.end());
  double best = 0, mid = 0.5 * (cd.m + cd.M);
  for (std::size_t k = 1; k < xs.size(); ++k)
    if (xs[k] - xs[k - 1] > best) {
      best = xs[k] - xs[k - 1];
      mid = 0.5 * (xs[k] + xs[k - 1]);
    }
  return mid;
}

inline BaseData make_base(const PlaneDomain& dom, std::optional<double> basepoint = std::nullopt,
                          std::optional<double> nu = std::nullopt) {
  const auto& cd = dom.critical();
  BaseData b;
  b.basepoint = basepoint ? *basepoint : default_basepoint(cd);
  b.nu = nu ? *nu : default_nu(cd);
  check_loop_inputs(cd, b.basepoint, b.nu);
  auto vals = cd.oval_values();
  b.eta = upper_corridor_height(cd, std::min(b.basepoint, vals.front()), std::max(b.basepoint, vals.back()), b.nu);
  b.fiber = make_fiber<double>(dom.numeric(), {b.basepoint, 0.0});
  return b;
}

/// Path from the base point to t_j + nu/2 through the upper half-plane.
inline ComplexPath standard_path(const BaseData& b, double tj) { return upper_path(b.basepoint, tj + b.nu / 2, b.eta); }

namespace detail {

inline TrackOptions tracking_options(const PlaneDomain& dom) {
  TrackOptions o;
  o.branch_points = dom.critical().branch_points();
  return o;
}

/// Positions (i, j) of the closest root pair to s_c, with the runner-up pair distance.
inline std::pair<std::pair<int, int>, std::pair<double, double>> closest_pair(const std::vector<Complex>& roots,
                                                                              Complex s_c) {
  std::vector<std::pair<double, int>> d;
  for (std::size_t i = 0; i < roots.size(); ++i) d.push_back({std::abs(roots[i] - s_c), static_cast<int>(i)});
  std::sort(d.begin(), d.end());
  if (d.size() < 2) fail(ErrorKind::Genericity, "fiber has fewer than two roots");
  int i = d[0].second, j = d[1].second;
  double pair_dist = std::abs(roots[i] - roots[j]);
  double runner = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < roots.size(); ++a)
    for (std::size_t c = a + 1; c < roots.size(); ++c) {
      if ((int)a == std::min(i, j) && (int)c == std::max(i, j)) continue;
      runner = std::min(runner, std::abs(roots[a] - roots[c]));
    }
  return {{i, j}, {pair_dist, runner}};
}

inline bool is_real_root(Complex z, double scale) { return std::abs(z.imag()) <= 1e-8 * std::max(scale, std::abs(z)); }

}  // namespace detail

/// For each oval critical value t_j: the colliding pair at t_j + nu/2, checked to close
/// at the square-root rate, labelled by transporting the base fiber along the standard
/// path.
inline std::vector<VanishingCycle0> vanishing_cycles(const PlaneDomain& dom, const BaseData& base,
                                                     const TrackingConfig& cfg = {}) {
  const auto& cd = dom.critical();
  if (cd.oval.empty()) fail(ErrorKind::Genericity, "no critical values on the oval: not a bounded oval");
  const auto& g = dom.numeric();
  std::vector<VanishingCycle0> out;
  for (std::size_t k = 0; k < cd.oval.size(); ++k) {
    const auto& v = cd.values[cd.oval[k]];
    const double tj = v.t.real();
    const Complex sc(v.s, 0.0);
    auto path = standard_path(base, tj);
    auto res = track_fiber<double>(g, path, base.fiber, cfg, detail::tracking_options(dom));
    const auto& roots = res.end.roots;
    auto [pr, dist] = detail::closest_pair(roots, sc);
    if (dist.second < 2 * dist.first)
      fail(ErrorKind::Genericity, "ambiguous collision pair at t=" + std::to_string(tj));
    // Square-root collision rate from a fresh fiber closer to t_j.
    auto near = g.roots({tj + base.nu / 8, 0.0}, 1e-15);
    auto [pr8, dist8] = detail::closest_pair(near, sc);
    (void)pr8;
    VanishingCycle0 c;
    c.origin = tj;
    c.index = k;
    c.collision_ratio = dist.first / dist8.first;
    if (std::abs(c.collision_ratio - 2.0) > 0.3)
      fail(ErrorKind::Genericity, "pair at t=" + std::to_string(tj) + " does not collide at the square-root rate");
    Complex a = roots[pr.first], b = roots[pr.second];
    const double scale = dom.scale();
    bool real_pair = detail::is_real_root(a, scale) && detail::is_real_root(b, scale);
    int plus, minus;
    if (real_pair) {
      c.sign_convention = "real-pair: upper - lower";
      plus = a.real() > b.real() ? pr.first : pr.second;
    } else {
      c.sign_convention = "complex-pair: larger Im - smaller Im";
      plus = a.imag() > b.imag() ? pr.first : pr.second;
    }
    minus = plus == pr.first ? pr.second : pr.first;
    c.plus_position = plus;
    c.minus_position = minus;
    c.plus_label = res.end.labels[plus];
    c.minus_label = res.end.labels[minus];
    out.push_back(c);
  }
  return out;
}

struct GermLatticeF {
  std::vector<VanishingCycle0> cycles;
  lattice::GramLattice gram;
  std::size_t fiber_size = 0;
};

/// Intersection numbers of the 0-cycles: sums of coefficient products over common
/// base-fiber labels. The sign factor (-1)^(1 + n/2) is +1 for plane domains.
inline GermLatticeF gram_of_cycles(const std::vector<VanishingCycle0>& cycles, std::size_t fiber_size) {
  if (cycles.empty()) fail(ErrorKind::Input, "no cycles");
  const std::size_t r = cycles.size();
  std::vector<ZeroCycle> zs;
  for (const auto& c : cycles) zs.push_back(c.as_cycle(fiber_size));
  std::vector<std::vector<BigInt>> g(r, std::vector<BigInt>(r, 0));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      long long s = 0;
      for (std::size_t k = 0; k < fiber_size; ++k) s += zs[i][k] * zs[j][k];
      g[i][j] = s;
    }
  return {cycles, lattice::GramLattice(std::move(g)), fiber_size};
}

inline lattice::LatticeVector pl_reflect(const GermLatticeF& F, const lattice::LatticeVector& v, std::size_t j) {
  return lattice::reflect(F.gram, v, j);
}

/// +1 at each slice's upper endpoint and -1 at its lower endpoint, on base labels.
inline ZeroCycle boundary_class(const PlaneDomain& dom, const BaseData& base) {
  const double t = base.basepoint;
  const auto& cd = dom.critical();
  if (!(t > cd.m && t < cd.M)) fail(ErrorKind::Input, "basepoint must lie in (m, M)");
  ZeroCycle z(base.fiber.roots.size(), 0);
  auto match = [&](double s) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < base.fiber.roots.size(); ++i)
      if (std::abs(base.fiber.roots[i] - Complex(s, 0.0)) < std::abs(base.fiber.roots[best] - Complex(s, 0.0))) best = i;
    return best;
  };
  for (const auto& iv : real_slice(dom, t)) {
    z[base.fiber.labels[match(iv.upper)]] += 1;
    z[base.fiber.labels[match(iv.lower)]] -= 1;
  }
  return z;
}

inline ZeroCycle signed_sum(const GermLatticeF& F, const std::vector<int>& eps, std::optional<double> below = std::nullopt) {
  ZeroCycle z(F.fiber_size, 0);
  for (std::size_t j = 0; j < F.cycles.size(); ++j) {
    if (below && !(F.cycles[j].origin < *below)) continue;
    z[F.cycles[j].plus_label] += eps[j];
    z[F.cycles[j].minus_label] -= eps[j];
  }
  return z;
}

struct KernelCertificate {
  std::vector<int> eps;
  /// gram * eps, all zero on success.
  std::vector<BigInt> gram_times_eps;
};

inline constexpr std::size_t kMaxSignSearch = 20;

/// Finds signs eps with sum_{t_j < tau} eps_j delta_j equal to the boundary class at the
/// base point and sum_j eps_j delta_j = 0, then checks gram * eps = 0 exactly. The first
/// pattern in lexicographic order (+1 before -1) wins.
inline KernelCertificate kernel_certificate(const GermLatticeF& F, const ZeroCycle& boundary, double basepoint) {
  const std::size_t r = F.cycles.size();
  if (r > kMaxSignSearch)
    fail(ErrorKind::Certificate, "sign search skipped: " + std::to_string(r) + " cycles exceed the cap of 20");
  const ZeroCycle zero(F.fiber_size, 0);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << r); ++mask) {
    std::vector<int> eps(r);
    for (std::size_t j = 0; j < r; ++j) eps[j] = (mask >> (r - 1 - j)) & 1 ? -1 : 1;
    if (signed_sum(F, eps, basepoint) != boundary) continue;
    if (signed_sum(F, eps) != zero) continue;
    KernelCertificate cert;
    cert.eps = eps;
    bool ok = true;
    for (std::size_t i = 0; i < r; ++i) {
      BigInt s = 0;
      for (std::size_t j = 0; j < r; ++j) s += F.gram(i, j) * eps[j];
      cert.gram_times_eps.push_back(s);
      ok = ok && s == 0;
    }
    if (!ok) fail(ErrorKind::Certificate, "signed cycle sum is not in the kernel of the Gram form");
    return cert;
  }
  fail(ErrorKind::Certificate, "no sign vector matches the boundary class");
}

struct ComponentKernelCheck {
  std::vector<std::size_t> component;
  lattice::LatticeVector sum;
  bool in_kernel = false;
};

/// For each irreducible component S of the Gram form: is sum_{j in S} eps_j e_j in the
/// kernel?
inline std::vector<ComponentKernelCheck> component_kernel_sums(const lattice::GramLattice& gram,
                                                               const std::vector<int>& eps) {
  std::vector<ComponentKernelCheck> out;
  for (const auto& comp : lattice::irreducible_components(gram)) {
    ComponentKernelCheck c;
    c.component = comp;
    c.sum.assign(gram.rank(), 0);
    for (auto j : comp) c.sum[j] = eps.at(j);
    c.in_kernel = true;
    for (std::size_t i = 0; i < gram.rank(); ++i)
      if (lattice::pairing_with_generator(gram, i, c.sum) != 0) c.in_kernel = false;
    out.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Germs Phi_j.

/// Phi_j at t_j + h for real h in (0, nu/2]: J * integral from t_j of (s_plus - s_minus),
/// with t = t_j + u^2 to remove the square root at the critical value. The pair is the
/// one closest to the critical point, oriented as in the cycle's convention.
inline Complex local_germ_value(const PlaneDomain& dom, const VanishingCycle0& c, double h) {
  const auto& v = dom.critical().values[dom.critical().oval[c.index]];
  const Complex sc(v.s, 0.0);
  const bool real_pair = c.sign_convention.rfind("real", 0) == 0;
  const double scale = dom.scale();
  auto integrand = [&](double u) -> Complex {
    if (u == 0) return 0.0;
    auto roots = dom.numeric().roots({c.origin + u * u, 0.0}, 1e-15);
    auto [pr, d] = detail::closest_pair(roots, sc);
    (void)d;
    Complex a = roots[pr.first], b = roots[pr.second];
    bool a_plus = real_pair ? a.real() > b.real() : a.imag() > b.imag();
    (void)scale;
    return (a_plus ? a - b : b - a) * 2.0 * u;
  };
  using boost::math::quadrature::gauss;
  const double U = std::sqrt(h);
  auto re = gauss<double, 30>::integrate([&](double u) { return integrand(u).real(); }, 0.0, U);
  auto im = gauss<double, 30>::integrate([&](double u) { return integrand(u).imag(); }, 0.0, U);
  return dom.area_scale() * Complex(re, im);
}

struct GermValue {
  Complex at_base;
  /// The germ's cycle on base labels after transport back; equals the vanishing cycle.
  ZeroCycle cycle;
};

/// Phi_j continued from t_j + nu/2 back to the base point along the standard path.
inline GermValue germ_at_base(const PlaneDomain& dom, const BaseData& base, const VanishingCycle0& c,
                              const TrackingConfig& cfg = {}) {
  auto path = standard_path(base, c.origin);
  auto fwd = track_fiber<double>(dom.numeric(), path, base.fiber, cfg, detail::tracking_options(dom));
  AreaGerm g;
  g.t = path.end();
  g.value = local_germ_value(dom, c, base.nu / 2);
  g.fiber = fwd.end;
  g.cycle.assign(g.fiber.roots.size(), 0);
  g.cycle[c.plus_position] = 1;
  g.cycle[c.minus_position] = -1;
  auto back = detail::continue_with<double>(dom, dom.numeric(), g, path.reversed(), cfg, false);
  // Map positions back to base labels by matching the returned fiber to the base fiber.
  GermValue out;
  out.at_base = back.germ.value;
  out.cycle.assign(base.fiber.roots.size(), 0);
  auto perm = match_fibers<double>(back.germ.fiber.roots, base.fiber.roots);
  for (std::size_t i = 0; i < perm.size(); ++i) out.cycle[base.fiber.labels[perm[i]]] += back.germ.cycle[i];
  return out;
}

struct SlopeFit {
  double slope = 0;
  std::vector<std::pair<double, double>> samples;  // (t - t_j, |Phi_j|)
};

/// Least-squares slope of log|Phi_j(t_j + h)| against log h for h = nu/2 * 2^-k.
inline SlopeFit asymptotic_slope(const PlaneDomain& dom, const VanishingCycle0& c, double nu, int k0 = 3, int k1 = 10) {
  SlopeFit fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (int k = k0; k <= k1; ++k) {
    double h = nu / 2 * std::ldexp(1.0, -k);
    double val = std::abs(local_germ_value(dom, c, h));
    fit.samples.push_back({h, val});
    double x = std::log(h), y = std::log(val);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return fit;
}

/// Checks, loop by loop, that the tracked monodromy of standard loop j is the
/// transposition of delta_j's support and that it moves every delta_i to
/// delta_i - <delta_j, delta_i> delta_j.
struct PlConsistency {
  bool consistent = true;
  std::vector<Permutation> loop_permutations;  // on base labels
  std::vector<std::string> issues;
};

inline PlConsistency pl_consistency(const PlaneDomain& dom, const BaseData& base, const GermLatticeF& F,
                                    const TrackingConfig& cfg = {}) {
  PlConsistency rep;
  const std::size_t n = F.fiber_size;
  auto loops = standard_loops(dom.critical(), base.basepoint, base.nu);
  for (std::size_t j = 0; j < F.cycles.size(); ++j) {
    auto p = loop_permutation<double>(dom.numeric(), loops[F.cycles[j].index], cfg, detail::tracking_options(dom));
    rep.loop_permutations.push_back(p);
    const auto& cj = F.cycles[j];
    for (std::size_t k = 0; k < n; ++k) {
      int expect = static_cast<int>(k);
      if ((int)k == cj.plus_label) expect = cj.minus_label;
      if ((int)k == cj.minus_label) expect = cj.plus_label;
      if (p[k] != expect) {
        rep.consistent = false;
        rep.issues.push_back("loop " + std::to_string(j + 1) + " is not the transposition of its cycle's support");
        break;
      }
    }
    auto dj = cj.as_cycle(n);
    for (std::size_t i = 0; i < F.cycles.size(); ++i) {
      auto di = F.cycles[i].as_cycle(n);
      ZeroCycle moved(n, 0);
      for (std::size_t k = 0; k < n; ++k) moved[p[k]] += di[k];
      long long pij = static_cast<long long>(F.gram(j, i));
      ZeroCycle expect(n, 0);
      for (std::size_t k = 0; k < n; ++k) expect[k] = di[k] - static_cast<int>(pij) * dj[k];
      if (moved != expect) {
        rep.consistent = false;
        rep.issues.push_back("loop " + std::to_string(j + 1) + " moves cycle " + std::to_string(i + 1) +
                             " against the reflection formula");
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// The whole lattice pipeline.

struct LatticeAnalysis {
  BaseData base;
  std::vector<VanishingCycle0> cycles;
  GermLatticeF lattice;
  ZeroCycle boundary;
  lattice::FinitenessVerdict finiteness;
  std::optional<KernelCertificate> certificate;
  std::string certificate_error;
  std::vector<ComponentKernelCheck> components;
  std::vector<Complex> germs_at_base;
  /// sum_j eps_j Phi_j(tau) and sum over t_j < tau; equal Area and V(tau) when certified.
  Complex certified_total;
  Complex certified_partial;
  PlConsistency consistency;
};

inline LatticeAnalysis analyze_lattice(const PlaneDomain& dom, const TrackingConfig& cfg = {},
                                       std::optional<double> basepoint = std::nullopt,
                                       std::optional<double> nu = std::nullopt,
                                       std::size_t max_orbit = lattice::kDefaultMaxOrbit) {
  LatticeAnalysis a;
  a.base = make_base(dom, basepoint, nu);
  a.cycles = vanishing_cycles(dom, a.base, cfg);
  a.lattice = gram_of_cycles(a.cycles, a.base.fiber.roots.size());
  a.boundary = boundary_class(dom, a.base);
  a.finiteness = lattice::is_finite(a.lattice.gram, max_orbit);
  try {
    a.certificate = kernel_certificate(a.lattice, a.boundary, a.base.basepoint);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Certificate) throw;
    a.certificate_error = e.what();
  }
  for (const auto& c : a.cycles) a.germs_at_base.push_back(germ_at_base(dom, a.base, c, cfg).at_base);
  if (a.certificate) {
    a.components = component_kernel_sums(a.lattice.gram, a.certificate->eps);
    for (std::size_t j = 0; j < a.cycles.size(); ++j) {
      a.certified_total += double(a.certificate->eps[j]) * a.germs_at_base[j];
      if (a.cycles[j].origin < a.base.basepoint) a.certified_partial += double(a.certificate->eps[j]) * a.germs_at_base[j];
    }
  }
  a.consistency = pl_consistency(dom, a.base, a.lattice, cfg);
  return a;
}

}  // namespace ovalmono
