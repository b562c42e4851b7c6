#pragma once

// JSON reports for the command line front end.

#include "json.hpp"

#include <chrono>
#include <optional>
#include <string>

#include "ovalmono/area.hpp"
#include "ovalmono/io.hpp"
#include "ovalmono/lattice.hpp"
#include "ovalmono/oddcheck.hpp"
#include "ovalmono/picard_lefschetz.hpp"

#ifndef OVALMONO_VERSION
#define OVALMONO_VERSION "0.0.0"
#endif

namespace ovalmono {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

struct AnalysisConfig {
  /// Unset means (1, 0), rotated to a generic direction when needed. An explicit
  /// direction is used as given and must pass the genericity check.
  std::optional<DirectionFrame> direction;
  std::optional<double> nu;
  double tolerance = 1e-12;
  int iterations = 3;
  std::size_t max_orbit = lattice::kDefaultMaxOrbit;
  HalfPlane half_plane = HalfPlane::Upper;
  unsigned precision_bits = 53;
};

inline std::string to_string(HalfPlane h) { return h == HalfPlane::Upper ? "upper" : "lower"; }

inline Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Json vector_json(const lattice::LatticeVector& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(x.str());
  return a;
}

inline Json gram_json(const lattice::GramLattice& g) {
  Json a = Json::array();
  for (const auto& r : g.rows()) {
    Json row = Json::array();
    for (const auto& x : r) row.push_back(static_cast<long long>(x));
    a.push_back(row);
  }
  return a;
}

inline Json finiteness_json(const lattice::GramLattice& g, const lattice::FinitenessVerdict& v) {
  Json j;
  j["finite"] = v.finite;
  Json minors = Json::array();
  for (const auto& m : v.leading_minors) minors.push_back(to_string(m));
  j["leading_minors"] = minors;
  Json ker = Json::array();
  for (const auto& k : v.kernel) ker.push_back(vector_json(k));
  j["kernel_rank"] = v.kernel.size();
  j["kernel_basis"] = ker;
  Json comps = Json::array();
  for (const auto& c : lattice::irreducible_components(g)) {
    Json cc = Json::array();
    for (auto i : c) cc.push_back(i + 1);
    comps.push_back(cc);
  }
  j["components"] = comps;
  j["orbit_cap"] = v.orbit_cap;
  j["orbit_cap_hit"] = v.orbit_cap_hit;
  if (v.witness_generator) {
    j["witness_generator"] = *v.witness_generator + 1;
    // The last few orbit layers show the growth.
    Json w = Json::array();
    const std::size_t n = v.witness_vectors.size(), from = n > 5 ? n - 5 : 0;
    for (std::size_t k = from; k < n; ++k) w.push_back(vector_json(v.witness_vectors[k]));
    j["witness_layers"] = n;
    j["witness_layer_extremes_tail"] = w;
  }
  return j;
}

inline Json config_json(const AnalysisConfig& c) {
  Json j;
  j["direction"] = c.direction ? Json(to_string(c.direction->a) + "," + to_string(c.direction->b)) : Json("auto");
  j["nu"] = c.nu ? Json(*c.nu) : Json("auto");
  j["tolerance"] = c.tolerance;
  j["iterations"] = c.iterations;
  j["max_orbit"] = c.max_orbit;
  j["half_plane"] = to_string(c.half_plane);
  j["precision"] = c.precision_bits;
  return j;
}

inline Json loop_json(const LoopProgram& p) {
  Json j;
  j["basepoint"] = p.basepoint;
  j["nu"] = p.nu;
  Json ann = Json::array();
  for (const auto& a : p.annotations) ann.push_back({{"t", a.t}, {"action", to_string(a.action)}});
  j["annotations"] = ann;
  j["path"] = serialize(p.path);
  return j;
}

inline DirectionFrame resolve_direction(const DomainSpec& spec, const AnalysisConfig& cfg) {
  if (cfg.direction) {
    if (!cfg.direction->valid()) fail(ErrorKind::DegenerateDirection, "direction (0, 0) is degenerate");
    auto rep = genericity_check(spec, *cfg.direction);
    if (!rep.passed) fail(ErrorKind::Genericity, "direction is not generic: " + rep.issues.front());
    return *cfg.direction;
  }
  return choose_generic_frame(spec, DirectionFrame{});
}

inline TrackingConfig tracking_config(const AnalysisConfig& c) {
  TrackingConfig t;
  t.newton_tol = c.tolerance;
  t.precision_bits = c.precision_bits;
  return t;
}

/// genericity -> critical values -> vanishing cycles -> Gram -> finiteness -> kernel
/// certificate -> big-loop progression.
inline Json analyze(const DomainSpec& spec, const AnalysisConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  if (cfg.iterations < 0) fail(ErrorKind::Input, "iterations must be non-negative");
  const auto frame = resolve_direction(spec, cfg);
  PlaneDomain dom(spec, frame);
  const auto& cd = dom.critical();
  const auto tcfg = tracking_config(cfg);

  Json r;
  r["schema"] = kSchemaVersion;
  r["tool"] = {{"name", "ovalmono"}, {"version", OVALMONO_VERSION}};
  r["config"] = config_json(cfg);

  Json curve;
  Json monos = Json::array();
  for (const auto& m : spec.f.monomials()) monos.push_back({m.x_degree, m.y_degree, to_string(m.coeff)});
  curve["monomials"] = monos;
  curve["degree"] = spec.f.total_degree();
  curve["seed"] = {to_string(spec.seed_x), to_string(spec.seed_y)};
  curve["direction"] = {to_string(frame.a), to_string(frame.b)};
  curve["area_scale"] = to_string(frame.area_scale());
  r["curve"] = curve;

  Json crit;
  Json disc = Json::array();
  for (const auto& c : cd.discriminant.coeffs()) disc.push_back(to_string(c));
  crit["discriminant"] = disc;
  Json vals = Json::array();
  for (const auto& v : cd.values) {
    Json e{{"t", complex_json(v.t)}, {"multiplicity", v.multiplicity}, {"real", v.is_real}, {"on_oval", v.on_oval}};
    if (v.on_oval) {
      e["s"] = v.s;
      e["kind"] = v.kind > 0 ? "min" : "max";
      e["curvature"] = v.curvature;
    }
    vals.push_back(e);
  }
  crit["values"] = vals;
  crit["m"] = cd.m;
  crit["M"] = cd.M;
  r["critical"] = crit;
  const double area = total_area(dom);
  r["area"] = area;

  auto la = analyze_lattice(dom, tcfg, std::nullopt, cfg.nu, cfg.max_orbit);
  Json lat;
  lat["basepoint"] = la.base.basepoint;
  lat["nu"] = la.base.nu;
  Json cyc = Json::array();
  for (const auto& c : la.cycles)
    cyc.push_back({{"origin", c.origin},
                   {"plus_label", c.plus_label},
                   {"minus_label", c.minus_label},
                   {"convention", c.sign_convention},
                   {"collision_ratio", c.collision_ratio}});
  lat["cycles"] = cyc;
  lat["gram"] = gram_json(la.lattice.gram);
  lat["finiteness"] = finiteness_json(la.lattice.gram, la.finiteness);
  lat["boundary"] = la.boundary;
  Json cert;
  if (la.certificate) {
    cert["found"] = true;
    cert["eps"] = la.certificate->eps;
    Json ge = Json::array();
    for (const auto& x : la.certificate->gram_times_eps) ge.push_back(x.str());
    cert["gram_times_eps"] = ge;
    Json comps = Json::array();
    for (const auto& c : la.components) {
      Json cc = Json::array();
      for (auto i : c.component) cc.push_back(i + 1);
      comps.push_back({{"component", cc}, {"in_kernel", c.in_kernel}});
    }
    cert["component_sums"] = comps;
    cert["germ_sum"] = complex_json(la.certified_total);
    cert["germ_sum_below_basepoint"] = complex_json(la.certified_partial);
    cert["area_at_basepoint"] = area_direct(dom, la.base.basepoint);
  } else {
    cert["found"] = false;
    cert["error"] = la.certificate_error;
  }
  lat["kernel_certificate"] = cert;
  Json germs = Json::array();
  for (const auto& g : la.germs_at_base) germs.push_back(complex_json(g));
  lat["germs_at_basepoint"] = germs;
  lat["reflection_consistent"] = la.consistency.consistent;
  r["lattice"] = lat;

  auto sh = monodromy_shift(dom, cfg.iterations, tcfg, cfg.nu, cfg.half_plane);
  Json mono;
  mono["loop"] = loop_json(sh.loop);
  Json prog = Json::array();
  for (auto v : sh.values) prog.push_back(complex_json(v));
  mono["values"] = prog;
  double worst = 0;
  for (std::size_t i = 1; i < sh.values.size(); ++i)
    worst = std::max(worst, std::abs(sh.values[i] - sh.values[0] - 2.0 * area * double(i)) / (2 * area * double(i)));
  mono["expected_increment"] = 2 * area;
  mono["max_relative_error"] = worst;
  r["monodromy"] = mono;

  r["timing"] = {{"seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}};
  return r;
}

inline Json reflection_report(const lattice::GramLattice& g, std::size_t max_orbit) {
  Json r;
  r["schema"] = kSchemaVersion;
  r["tool"] = {{"name", "ovalmono"}, {"version", OVALMONO_VERSION}};
  r["config"] = {{"max_orbit", max_orbit}};
  r["gram"] = gram_json(g);
  r["finiteness"] = finiteness_json(g, lattice::is_finite(g, max_orbit));
  return r;
}

inline Json oddcheck_report(int n, const std::vector<double>& semiaxes, int degree_max) {
  Json r;
  r["schema"] = kSchemaVersion;
  r["tool"] = {{"name", "ovalmono"}, {"version", OVALMONO_VERSION}};
  r["config"] = {{"dimension", n}, {"semiaxes", semiaxes}, {"degree_max", degree_max}};
  auto fit = polynomial_fit_test(n, semiaxes, degree_max);
  Json rows = Json::array();
  for (const auto& row : fit.rows) rows.push_back({{"degree", row.degree}, {"max_residual", row.max_residual}});
  r["fit"] = {{"threshold", fit.threshold},
              {"exact_degree", fit.exact_degree ? Json(*fit.exact_degree) : Json(nullptr)},
              {"table", rows}};
  r["half_volume"] = cap_volume_numeric({n, semiaxes, 0.0});
  r["total_volume"] = total_volume(n, semiaxes);
  bool ball = std::all_of(semiaxes.begin(), semiaxes.end(), [&](double a) { return a == semiaxes[0]; });
  if (ball) {
    auto c = four_valued_cover_check(n, semiaxes[0]);
    r["four_valued_cover"] = {{"passed", c.passed},
                              {"samples", c.samples},
                              {"max_relation_residual", c.max_relation_residual},
                              {"tangency_mismatch", c.tangency_mismatch}};
  }
  return r;
}

}  // namespace ovalmono
