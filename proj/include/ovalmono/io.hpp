#pragma once

// Text formats: curve files (`i j p/q` monomial lines plus a `seed x y` line) and Gram
// files (N, then N rows of N integers).

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ovalmono/curve.hpp"
#include "ovalmono/errors.hpp"
#include "ovalmono/exact.hpp"
#include "ovalmono/lattice.hpp"

namespace ovalmono {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Parse, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

namespace detail {

inline std::vector<std::string> tokens(const std::string& line) {
  std::istringstream ls(line);
  std::vector<std::string> out;
  for (std::string w; ls >> w;) out.push_back(w);
  return out;
}

inline int parse_exponent(const std::string& w, int lineno) {
  std::size_t pos = 0;
  int v = -1;
  try {
    v = std::stoi(w, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != w.size() || v < 0)
    fail(ErrorKind::Parse, "line " + std::to_string(lineno) + ": bad exponent '" + w + "'");
  return v;
}

}  // namespace detail

/// Repeated monomials add up. Exactly one seed line is required.
inline DomainSpec parse_curve(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::map<std::pair<int, int>, Rational> terms;
  std::optional<std::pair<Rational, Rational>> seed;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    auto w = detail::tokens(line);
    if (w.empty()) continue;
    if (w[0] == "seed") {
      if (w.size() != 3) fail(ErrorKind::Parse, "line " + std::to_string(lineno) + ": seed needs two coordinates");
      if (seed) fail(ErrorKind::Parse, "line " + std::to_string(lineno) + ": second seed line");
      seed = {parse_rational(w[1]), parse_rational(w[2])};
      continue;
    }
    if (w.size() != 3)
      fail(ErrorKind::Parse, "line " + std::to_string(lineno) + ": expected 'i j coefficient'");
    int i = detail::parse_exponent(w[0], lineno), j = detail::parse_exponent(w[1], lineno);
    terms[{i, j}] += parse_rational(w[2]);
  }
  if (!seed) fail(ErrorKind::Parse, "missing seed line");
  std::vector<Monomial> ms;
  for (const auto& [ij, c] : terms)
    if (c != 0) ms.push_back({ij.first, ij.second, c});
  if (ms.empty()) fail(ErrorKind::Parse, "curve has no nonzero monomials");
  return DomainSpec{BivariatePoly(ms), seed->first, seed->second};
}

inline DomainSpec read_curve_file(const std::string& path) { return parse_curve(read_file(path)); }

inline std::string format_curve(const DomainSpec& d) {
  std::ostringstream os;
  for (const auto& m : d.f.monomials()) os << m.x_degree << ' ' << m.y_degree << ' ' << to_string(m.coeff) << '\n';
  os << "seed " << to_string(d.seed_x) << ' ' << to_string(d.seed_y) << '\n';
  return os.str();
}

/// Non-square or non-symmetric input is a parse error.
inline lattice::GramLattice parse_gram(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> w;
  std::string line;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    for (auto& t : detail::tokens(line)) w.push_back(t);
  }
  if (w.empty()) fail(ErrorKind::Parse, "empty Gram file");
  auto to_int = [](const std::string& s) {
    try {
      return BigInt(s);
    } catch (const std::exception&) {
      fail(ErrorKind::Parse, "not an integer: '" + s + "'");
    }
  };
  BigInt nb = to_int(w[0]);
  if (nb < 1 || nb > 1000) fail(ErrorKind::Parse, "Gram size out of range");
  const std::size_t n = static_cast<std::size_t>(nb);
  if (w.size() != 1 + n * n)
    fail(ErrorKind::Parse, "expected " + std::to_string(n * n) + " entries, found " + std::to_string(w.size() - 1));
  std::vector<std::vector<BigInt>> rows(n, std::vector<BigInt>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rows[i][j] = to_int(w[1 + i * n + j]);
  try {
    return lattice::GramLattice(std::move(rows));
  } catch (const Error& e) {
    fail(ErrorKind::Parse, e.what());
  }
}

inline lattice::GramLattice read_gram_file(const std::string& path) { return parse_gram(read_file(path)); }

inline std::string format_gram(const lattice::GramLattice& g) {
  std::ostringstream os;
  os << g.rank() << '\n';
  for (const auto& r : g.rows()) {
    for (std::size_t j = 0; j < r.size(); ++j) os << (j ? " " : "") << r[j];
    os << '\n';
  }
  return os.str();
}

}  // namespace ovalmono
