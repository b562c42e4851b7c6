// ovalmono command line: analyze, reflection, continue-area, oddcheck.

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include "ovalmono/report.hpp"

using namespace ovalmono;

namespace {

DirectionFrame parse_direction(const std::string& s) {
  auto comma = s.find(',');
  if (comma == std::string::npos) fail(ErrorKind::Parse, "direction must be 'a,b'");
  return {parse_rational(s.substr(0, comma)), parse_rational(s.substr(comma + 1))};
}

HalfPlane parse_half_plane(const std::string& s) {
  if (s == "upper") return HalfPlane::Upper;
  if (s == "lower") return HalfPlane::Lower;
  fail(ErrorKind::Parse, "half-plane must be 'upper' or 'lower'");
}

void emit(const std::string& text, const std::string& output) {
  if (output.empty() || output == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(output, std::ios::binary);
  if (!out) fail(ErrorKind::Input, "cannot write " + output);
  out << text;
}

struct CommonFlags {
  std::string direction;
  std::string nu;
  double tolerance = 1e-12;
  int iterations = 3;
  std::size_t max_orbit = lattice::kDefaultMaxOrbit;
  std::string half_plane = "upper";
  unsigned precision = 53;
  std::string output;

  AnalysisConfig config() const {
    AnalysisConfig c;
    if (!direction.empty()) c.direction = parse_direction(direction);
    if (!nu.empty()) {
      try {
        c.nu = std::stod(nu);
      } catch (const std::exception&) {
        fail(ErrorKind::Parse, "nu must be a number");
      }
    }
    c.tolerance = tolerance;
    c.iterations = iterations;
    c.max_orbit = max_orbit;
    c.half_plane = parse_half_plane(half_plane);
    c.precision_bits = precision;
    return c;
  }
};

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("--direction", f.direction, "Direction a,b of the linear function l = a x + b y (default: auto)");
  app->add_option("--nu", f.nu, "Loop radius scale nu (default: a quarter of the branch point spacing)");
  app->add_option("--tolerance", f.tolerance, "Newton tolerance for root tracking")->capture_default_str();
  app->add_option("--iterations", f.iterations, "Big-loop iterations k")->capture_default_str();
  app->add_option("--max-orbit", f.max_orbit, "Orbit enumeration cap")->capture_default_str();
  app->add_option("--half-plane", f.half_plane, "Side of the half-circle detours: upper or lower")->capture_default_str();
  app->add_option("--precision", f.precision, "Significand bits for continuation (53 = double)")->capture_default_str();
  app->add_option("--output,-o", f.output, "Output file (default: stdout)");
}

std::string csv_number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

/// Rows (step, Re t, Im t, Re V, Im V).
std::string continue_area_csv(const DomainSpec& spec, const AnalysisConfig& cfg, const std::string& loop,
                              const std::string& path_file) {
  const auto frame = resolve_direction(spec, cfg);
  PlaneDomain dom(spec, frame);
  const auto& cd = dom.critical();
  const auto tcfg = tracking_config(cfg);
  const double nu = cfg.nu ? *cfg.nu : default_nu(cd);
  std::ostringstream os;
  os << "step,re_t,im_t,re_v,im_v\n";
  std::size_t step = 0;
  auto row = [&](Complex t, Complex v) {
    os << step++ << ',' << csv_number(t.real()) << ',' << csv_number(t.imag()) << ',' << csv_number(v.real()) << ','
       << csv_number(v.imag()) << '\n';
  };
  auto run = [&](AreaGerm g, const ComplexPath& path, int times) {
    if (path.empty()) return;
    row(g.t, g.value);
    for (int i = 0; i < times; ++i) {
      auto res = area_continue_detailed(dom, g, path, tcfg, true);
      for (std::size_t k = 1; k < res.samples.size(); ++k) row(res.samples[k].t, res.samples[k].integral);
      g = res.germ;
    }
  };
  if (!path_file.empty()) {
    auto path = parse_path(read_file(path_file));
    if (path.empty()) return os.str();
    if (path.start().imag() != 0) fail(ErrorKind::Input, "path must start on the real axis");
    run(initial_germ(dom, path.start().real()), path, 1);
    return os.str();
  }
  if (loop == "big") {
    if (cfg.iterations == 0) {
      // A real sweep from m + nu/2 to just below the next oval critical value.
      auto vals = cd.oval_values();
      ComplexPath sweep;
      sweep.segment({cd.m + nu / 2, 0.0}, {vals[1] - nu / 2, 0.0});
      run(initial_germ(dom, cd.m + nu / 2), sweep, 1);
      return os.str();
    }
    auto prog = cd.oval.size() == 2 ? convex_big_loop(cd, cd.m + nu / 2, nu, cfg.half_plane)
                                    : general_big_loop(dom, nu, tcfg, cfg.half_plane);
    run(initial_germ(dom, prog.basepoint), prog.path, cfg.iterations);
    return os.str();
  }
  if (loop == "alpha-m" || loop == "alpha-M") {
    auto la = make_base(dom, std::nullopt, nu);
    auto prog = alpha_loop(cd, la.basepoint, loop == "alpha-m" ? cd.m : cd.M, nu, cfg.half_plane);
    run(initial_germ(dom, la.basepoint), prog.path, std::max(cfg.iterations, 1));
    return os.str();
  }
  if (loop == "none") return os.str();
  fail(ErrorKind::Parse, "loop must be big, alpha-m, alpha-M or none");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monodromy of cut-area functions of plane domains bounded by algebraic ovals"};
  app.require_subcommand(1);
  app.set_version_flag("--version", OVALMONO_VERSION);

  CommonFlags af;
  std::string curve_file;
  auto* analyze_cmd = app.add_subcommand("analyze", "Full pipeline report (JSON)");
  analyze_cmd->add_option("curve", curve_file, "Curve file")->required();
  add_common(analyze_cmd, af);

  std::string gram_file, refl_out;
  std::size_t refl_orbit = lattice::kDefaultMaxOrbit;
  auto* refl_cmd = app.add_subcommand("reflection", "Finiteness of the reflection group of a Gram matrix (JSON)");
  refl_cmd->add_option("matrix", gram_file, "Gram file")->required();
  refl_cmd->add_option("--max-orbit", refl_orbit, "Orbit enumeration cap")->capture_default_str();
  refl_cmd->add_option("--output,-o", refl_out, "Output file (default: stdout)");

  CommonFlags cf;
  std::string cont_curve, loop = "big", path_file;
  auto* cont_cmd = app.add_subcommand("continue-area", "Continued area along a loop (CSV)");
  cont_cmd->add_option("curve", cont_curve, "Curve file")->required();
  cont_cmd->add_option("--loop", loop, "big, alpha-m, alpha-M or none")->capture_default_str();
  cont_cmd->add_option("--path", path_file, "Path file (overrides --loop)");
  add_common(cont_cmd, cf);

  int dimension = 3, degree_max = 12;
  std::vector<double> semiaxes;
  std::string odd_out;
  auto* odd_cmd = app.add_subcommand("oddcheck", "Polynomiality of ball and ellipsoid cap volumes (JSON)");
  odd_cmd->add_option("--dimension,-n", dimension, "Dimension")->capture_default_str();
  odd_cmd->add_option("--semiaxes", semiaxes, "Semiaxes (default: all 1)")->delimiter(',');
  odd_cmd->add_option("--degree-max", degree_max, "Largest fitted degree")->capture_default_str();
  odd_cmd->add_option("--output,-o", odd_out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : exit_code(ErrorKind::Parse);
  }

  try {
    if (*analyze_cmd) {
      auto spec = read_curve_file(curve_file);
      emit(analyze(spec, af.config()).dump(2) + "\n", af.output);
    } else if (*refl_cmd) {
      auto g = read_gram_file(gram_file);
      emit(reflection_report(g, refl_orbit).dump(2) + "\n", refl_out);
    } else if (*cont_cmd) {
      auto spec = read_curve_file(cont_curve);
      emit(continue_area_csv(spec, cf.config(), loop, path_file), cf.output);
    } else if (*odd_cmd) {
      if (semiaxes.empty()) semiaxes.assign(dimension, 1.0);
      emit(oddcheck_report(dimension, semiaxes, degree_max).dump(2) + "\n", odd_out);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
