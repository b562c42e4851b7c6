#pragma once

// Piecewise paths in the complex parameter line: straight segments and circular arcs.

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "ovalmono/errors.hpp"

namespace ovalmono {

using Complex = std::complex<double>;

struct Segment {
  Complex from;
  Complex to;
};

/// center + radius * exp(i (theta0 + u * sweep)), u in [0, 1]; sweep is signed.
struct Arc {
  Complex center;
  double radius = 0;
  double theta0 = 0;
  double sweep = 0;
};

using PathPiece = std::variant<Segment, Arc>;

template <class Real>
std::complex<Real> piece_point(const PathPiece& p, const Real& u) {
  using C = std::complex<Real>;
  if (const auto* s = std::get_if<Segment>(&p)) {
    C a(Real(s->from.real()), Real(s->from.imag())), b(Real(s->to.real()), Real(s->to.imag()));
    return a + (b - a) * u;
  }
  const auto& a = std::get<Arc>(p);
  using std::cos;
  using std::sin;
  Real ang = Real(a.theta0) + u * Real(a.sweep);
  return C(Real(a.center.real()), Real(a.center.imag())) + Real(a.radius) * C(cos(ang), sin(ang));
}

/// d t / d u along the piece.
template <class Real>
std::complex<Real> piece_velocity(const PathPiece& p, const Real& u) {
  using C = std::complex<Real>;
  if (const auto* s = std::get_if<Segment>(&p)) {
    return C(Real(s->to.real() - s->from.real()), Real(s->to.imag() - s->from.imag()));
  }
  const auto& a = std::get<Arc>(p);
  using std::cos;
  using std::sin;
  Real ang = Real(a.theta0) + u * Real(a.sweep);
  return C(Real(0), Real(a.sweep)) * Real(a.radius) * C(cos(ang), sin(ang));
}

inline double piece_length(const PathPiece& p) {
  if (const auto* s = std::get_if<Segment>(&p)) return std::abs(s->to - s->from);
  const auto& a = std::get<Arc>(p);
  return std::abs(a.sweep) * a.radius;
}

inline Complex piece_start(const PathPiece& p) { return piece_point<double>(p, 0.0); }
inline Complex piece_end(const PathPiece& p) { return piece_point<double>(p, 1.0); }

/// Distance from z to the piece.
inline double piece_distance(const PathPiece& p, Complex z) {
  if (const auto* s = std::get_if<Segment>(&p)) {
    Complex d = s->to - s->from;
    double len2 = std::norm(d);
    double u = len2 > 0 ? std::clamp(((z - s->from) * std::conj(d)).real() / len2, 0.0, 1.0) : 0.0;
    return std::abs(z - (s->from + u * d));
  }
  const auto& a = std::get<Arc>(p);
  Complex w = z - a.center;
  double best = std::min(std::abs(z - piece_start(p)), std::abs(z - piece_end(p)));
  if (std::abs(w) == 0) return a.radius;
  // Is arg(w) inside the swept range?
  const double two_pi = 2 * std::numbers::pi;
  double rel = std::arg(w) - a.theta0;
  if (a.sweep < 0) rel = -rel;
  rel = std::fmod(std::fmod(rel, two_pi) + two_pi, two_pi);
  if (rel <= std::abs(a.sweep) || std::abs(a.sweep) >= two_pi) best = std::min(best, std::abs(std::abs(w) - a.radius));
  return best;
}

inline PathPiece reversed(const PathPiece& p) {
  if (const auto* s = std::get_if<Segment>(&p)) return Segment{s->to, s->from};
  const auto& a = std::get<Arc>(p);
  return Arc{a.center, a.radius, a.theta0 + a.sweep, -a.sweep};
}

class ComplexPath {
 public:
  ComplexPath() = default;
  explicit ComplexPath(std::vector<PathPiece> pieces) : pieces_(std::move(pieces)) {}

  const std::vector<PathPiece>& pieces() const { return pieces_; }
  bool empty() const { return pieces_.empty(); }
  Complex start() const { return piece_start(pieces_.front()); }
  Complex end() const { return piece_end(pieces_.back()); }

  double length() const {
    double l = 0;
    for (const auto& p : pieces_) l += piece_length(p);
    return l;
  }

  ComplexPath& segment(Complex from, Complex to) {
    if (std::abs(to - from) > 0) pieces_.push_back(Segment{from, to});
    return *this;
  }
  ComplexPath& line_to(Complex to) { return segment(empty() ? to : end(), to); }
  ComplexPath& arc(Complex center, double radius, double theta0, double sweep) {
    if (radius > 0 && sweep != 0) pieces_.push_back(Arc{center, radius, theta0, sweep});
    return *this;
  }
  /// Full circle around `center` starting and ending at `through`; counter-clockwise
  /// unless `clockwise`.
  ComplexPath& circle(Complex center, Complex through, bool clockwise = false) {
    const double two_pi = 2 * std::numbers::pi;
    return arc(center, std::abs(through - center), std::arg(through - center), clockwise ? -two_pi : two_pi);
  }
  ComplexPath& append(const ComplexPath& other) {
    pieces_.insert(pieces_.end(), other.pieces_.begin(), other.pieces_.end());
    return *this;
  }

  ComplexPath reversed() const {
    ComplexPath r;
    for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) r.pieces_.push_back(ovalmono::reversed(*it));
    return r;
  }

  bool is_closed(double tol = 1e-12) const {
    return !empty() && std::abs(start() - end()) <= tol * std::max(1.0, std::abs(start()));
  }

  /// Consecutive pieces share endpoints.
  bool is_connected(double tol = 1e-12) const {
    for (std::size_t i = 1; i < pieces_.size(); ++i) {
      Complex a = piece_end(pieces_[i - 1]), b = piece_start(pieces_[i]);
      if (std::abs(a - b) > tol * std::max(1.0, std::abs(a))) return false;
    }
    return true;
  }

  /// Smallest distance from the path to any of the given points.
  double clearance(const std::vector<Complex>& points) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : pieces_)
      for (const auto& z : points) best = std::min(best, piece_distance(p, z));
    return best;
  }

  friend bool operator==(const ComplexPath& a, const ComplexPath& b) {
    if (a.pieces_.size() != b.pieces_.size()) return false;
    for (std::size_t i = 0; i < a.pieces_.size(); ++i) {
      const auto &p = a.pieces_[i], &q = b.pieces_[i];
      if (p.index() != q.index()) return false;
      if (const auto* s = std::get_if<Segment>(&p)) {
        const auto& t = std::get<Segment>(q);
        if (s->from != t.from || s->to != t.to) return false;
      } else {
        const auto &x = std::get<Arc>(p), &y = std::get<Arc>(q);
        if (x.center != y.center || x.radius != y.radius || x.theta0 != y.theta0 || x.sweep != y.sweep) return false;
      }
    }
    return true;
  }

 private:
  std::vector<PathPiece> pieces_;
};

/// One piece per line: `segment re0 im0 re1 im1` or `arc re_c im_c radius theta0 sweep`,
/// numbers printed with round-trip precision.
inline std::string serialize(const ComplexPath& path) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (const auto& p : path.pieces()) {
    if (const auto* s = std::get_if<Segment>(&p)) {
      os << "segment " << s->from.real() << ' ' << s->from.imag() << ' ' << s->to.real() << ' ' << s->to.imag()
         << '\n';
    } else {
      const auto& a = std::get<Arc>(p);
      os << "arc " << a.center.real() << ' ' << a.center.imag() << ' ' << a.radius << ' ' << a.theta0 << ' '
         << a.sweep << '\n';
    }
  }
  return os.str();
}

inline ComplexPath parse_path(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<PathPiece> pieces;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind)) continue;
    const int count = kind == "segment" ? 4 : 5;
    double v[5] = {0, 0, 0, 0, 0};
    for (int k = 0; k < count; ++k)
      if (!(ls >> v[k]))
        fail(ErrorKind::Parse, "path line " + std::to_string(lineno) + ": expected " + std::to_string(count) + " numbers");
    std::string extra;
    if (ls >> extra) fail(ErrorKind::Parse, "path line " + std::to_string(lineno) + ": trailing text");
    if (kind == "segment")
      pieces.push_back(Segment{{v[0], v[1]}, {v[2], v[3]}});
    else if (kind == "arc")
      pieces.push_back(Arc{{v[0], v[1]}, v[2], v[3], v[4]});
    else
      fail(ErrorKind::Parse, "path line " + std::to_string(lineno) + ": unknown piece '" + kind + "'");
  }
  return ComplexPath(std::move(pieces));
}

}  // namespace ovalmono
