#pragma once

// Cap volumes of balls and ellipsoids: polynomial in the cutting offset in odd dimension,
// not in even dimension.

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "ovalmono/errors.hpp"

namespace ovalmono {

/// Ellipsoid sum (x_i / a_i)^2 <= 1 in R^n cut by the plane x_0 = t; the cap is x_0 >= t.
struct CapQuery {
  int dimension = 3;
  std::vector<double> semiaxes{1.0, 1.0, 1.0};
  double offset = 0;

  void validate() const {
    if (dimension < 1) fail(ErrorKind::Input, "dimension must be positive");
    if (semiaxes.size() != static_cast<std::size_t>(dimension))
      fail(ErrorKind::Input, "need one semiaxis per dimension");
    for (double a : semiaxes)
      if (!(a >= 0)) fail(ErrorKind::Input, "semiaxes must be non-negative");
  }
};

namespace detail {

/// Integral over [0, theta] of sin^n.
inline double sine_power_integral(int n, double theta) {
  using boost::math::quadrature::gauss_kronrod;
  if (theta <= 0) return 0.0;
  return gauss_kronrod<double, 61>::integrate([n](double x) { return std::pow(std::sin(x), n); }, 0.0, theta, 8,
                                              1e-13);
}

/// Volume of the full ellipsoid with the given semiaxes, by slicing along the first axis:
/// each slice is the lower-dimensional ellipsoid scaled by sqrt(1 - x^2/a_0^2).
inline double ellipsoid_volume(const std::vector<double>& a, std::size_t from = 0) {
  const std::size_t k = a.size() - from;
  if (k == 0) return 1.0;
  const double rest = ellipsoid_volume(a, from + 1);
  // integral_{-a0}^{a0} (1 - x^2/a0^2)^((k-1)/2) dx = a0 * integral_0^pi sin^k.
  return rest * a[from] * sine_power_integral(static_cast<int>(k), std::numbers::pi);
}

}  // namespace detail

/// Volume of the cap x_0 >= t; 0 beyond the tangent plane t >= a_0 and the whole volume
/// for t <= -a_0.
inline double cap_volume_numeric(const CapQuery& q) {
  q.validate();
  const double a0 = q.semiaxes[0];
  if (a0 == 0) return 0.0;
  std::vector<double> rest(q.semiaxes.begin() + 1, q.semiaxes.end());
  const double slice = detail::ellipsoid_volume(rest);
  if (q.offset >= a0) return 0.0;
  const double theta = q.offset <= -a0 ? std::numbers::pi : std::acos(q.offset / a0);
  return slice * a0 * detail::sine_power_integral(q.dimension, theta);
}

inline double total_volume(int n, const std::vector<double>& semiaxes) {
  return cap_volume_numeric({n, semiaxes, -semiaxes.at(0)});
}

struct FitRow {
  int degree = 0;
  double max_residual = 0;
};

struct FitReport {
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<FitRow> rows;
  /// Smallest degree with max residual below the threshold.
  std::optional<int> exact_degree;
  double threshold = 1e-8;
  /// Coefficients in the scaled offset t / scale of the fit at the exact degree, or at
  /// degree_max when there is none.
  std::vector<double> coefficients;
  double scale = 1;

  double operator()(double t) const;
};

/// Least-squares polynomial of degree d through (ts, vs) in the scaled variable t / h.
/// Returns coefficients in the scaled variable.
inline std::vector<double> least_squares_poly(const std::vector<double>& ts, const std::vector<double>& vs, int d,
                                              double h) {
  const int N = static_cast<int>(ts.size());
  Eigen::MatrixXd A(N, d + 1);
  Eigen::VectorXd b(N);
  for (int i = 0; i < N; ++i) {
    double x = ts[i] / h, p = 1;
    for (int k = 0; k <= d; ++k) {
      A(i, k) = p;
      p *= x;
    }
    b(i) = vs[i];
  }
  Eigen::VectorXd scale = A.colwise().norm();
  for (int k = 0; k <= d; ++k) A.col(k) /= scale(k);
  Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
  std::vector<double> out(d + 1);
  for (int k = 0; k <= d; ++k) out[k] = c(k) / scale(k);
  return out;
}

inline double eval_scaled(const std::vector<double>& c, double t, double h) {
  double x = t / h, v = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
  return v;
}

inline double FitReport::operator()(double t) const { return eval_scaled(coefficients, t, scale); }

/// Fits cap volumes sampled at 4 * degree_max Chebyshev nodes on the middle 90% of the
/// offset interval by polynomials of degree 0..degree_max.
inline FitReport polynomial_fit_test(int n, const std::vector<double>& semiaxes, int degree_max,
                                     double threshold = 1e-8) {
  if (degree_max < 0) fail(ErrorKind::Input, "degree_max must be non-negative");
  const double a0 = semiaxes.at(0);
  const double h = 0.9 * a0;
  const int N = std::max(4 * degree_max, 4);
  FitReport rep;
  rep.threshold = threshold;
  for (int i = 0; i < N; ++i) {
    double t = h * std::cos(std::numbers::pi * (2.0 * i + 1) / (2.0 * N));
    rep.grid.push_back(t);
    rep.values.push_back(cap_volume_numeric({n, semiaxes, t}));
  }
  for (int d = 0; d <= degree_max; ++d) {
    auto c = least_squares_poly(rep.grid, rep.values, d, h);
    double r = 0;
    for (int i = 0; i < N; ++i) r = std::max(r, std::abs(eval_scaled(c, rep.grid[i], h) - rep.values[i]));
    rep.rows.push_back({d, r});
    if (!rep.exact_degree && r < threshold) {
      rep.exact_degree = d;
      rep.coefficients = c;
    }
    if (d == degree_max && !rep.exact_degree) rep.coefficients = c;
  }
  rep.scale = h;
  return rep;
}

struct CoverReport {
  bool passed = false;
  int samples = 0;
  /// max over samples of |prod(V - branch)| / total^4, where V is the true cut volume.
  double max_relation_residual = 0;
  /// |P(r)| and |P(-r) - total|: the polynomial branch meeting the constant branches.
  double tangency_mismatch = 0;
  double total = 0;
};

/// Four branches {0, total, P(t), total - P(t)} with P the fitted cap polynomial (degree n
/// for odd n, 12 otherwise), continued past the tangent planes t = +-r. The true cut
/// volume must be a root of the branch product on [-1.5 r, 1.5 r].
inline CoverReport four_valued_cover_check(int n, double r, int samples = 1000, double tol = 1e-9) {
  if (samples < 2) fail(ErrorKind::Input, "need at least two samples");
  CoverReport rep;
  rep.samples = samples;
  std::vector<double> axes(n, r);
  if (r == 0) {
    rep.passed = true;
    return rep;
  }
  rep.total = total_volume(n, axes);
  const int degree = n % 2 == 1 ? n : 12;
  auto fit = polynomial_fit_test(n, axes, degree, 1e-8 * rep.total);
  auto P = [&](double t) { return fit(t); };
  const double T = rep.total;
  rep.tangency_mismatch = std::max(std::abs(P(r)), std::abs(P(-r) - T)) / T;
  for (int i = 0; i < samples; ++i) {
    double t = -1.5 * r + 3.0 * r * i / (samples - 1);
    double v = cap_volume_numeric({n, axes, t});
    double p = P(t);
    double rel = std::abs(v / T) * std::abs(v / T - 1) * std::abs((v - p) / T) * std::abs((v - (T - p)) / T);
    rep.max_relation_residual = std::max(rep.max_relation_residual, rel);
  }
  rep.passed = rep.max_relation_residual < tol && rep.tangency_mismatch < tol;
  return rep;
}

}  // namespace ovalmono
