#pragma once

// Integer lattices with symmetric bilinear forms and the groups generated by the
// reflections in their roots. All arithmetic is exact.

#include <algorithm>
#include <cstddef>
#include <deque>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ovalmono/exact.hpp"

namespace ovalmono::lattice {

using LatticeVector = std::vector<BigInt>;

/// Rank-N lattice Z^N with Gram matrix gram(i, j) = <e_i, e_j>. Generator indices are
/// zero-based throughout the C++ interface.
class GramLattice {
 public:
  GramLattice() = default;

  explicit GramLattice(std::vector<std::vector<BigInt>> rows) : gram_(std::move(rows)) {
    const std::size_t n = gram_.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (gram_[i].size() != n) fail(ErrorKind::Input, "Gram matrix is not square");
      for (std::size_t j = 0; j < i; ++j)
        if (gram_[i][j] != gram_[j][i])
          fail(ErrorKind::Input, "Gram matrix is not symmetric at (" + std::to_string(i + 1) + "," +
                                     std::to_string(j + 1) + ")");
    }
  }

  static GramLattice from_ints(const std::vector<std::vector<long long>>& rows) {
    std::vector<std::vector<BigInt>> g;
    for (const auto& r : rows) g.emplace_back(r.begin(), r.end());
    return GramLattice(std::move(g));
  }

  std::size_t rank() const { return gram_.size(); }
  const BigInt& operator()(std::size_t i, std::size_t j) const { return gram_[i][j]; }
  const std::vector<std::vector<BigInt>>& rows() const { return gram_; }

  /// Every diagonal entry equals 2, so each basis vector is a root.
  bool root_generated() const {
    for (std::size_t i = 0; i < rank(); ++i)
      if (gram_[i][i] != 2) return false;
    return true;
  }

  friend bool operator==(const GramLattice&, const GramLattice&) = default;

 private:
  std::vector<std::vector<BigInt>> gram_;
};

inline LatticeVector basis_vector(std::size_t rank, std::size_t j) {
  LatticeVector v(rank, 0);
  v.at(j) = 1;
  return v;
}

/// <a, b> = a^T G b.
inline BigInt pairing(const GramLattice& lat, const LatticeVector& a, const LatticeVector& b) {
  BigInt s = 0;
  for (std::size_t i = 0; i < lat.rank(); ++i) {
    if (a[i] == 0) continue;
    BigInt row = 0;
    for (std::size_t j = 0; j < lat.rank(); ++j) row += lat(i, j) * b[j];
    s += a[i] * row;
  }
  return s;
}

/// <e_j, v>.
inline BigInt pairing_with_generator(const GramLattice& lat, std::size_t j, const LatticeVector& v) {
  BigInt s = 0;
  for (std::size_t k = 0; k < lat.rank(); ++k) s += lat(j, k) * v[k];
  return s;
}

/// R_j v = v - <e_j, v> e_j.
inline LatticeVector reflect(const GramLattice& lat, const LatticeVector& v, std::size_t j) {
  if (j >= lat.rank()) fail(ErrorKind::Input, "generator index out of range");
  if (v.size() != lat.rank()) fail(ErrorKind::Input, "vector length differs from lattice rank");
  if (lat(j, j) != 2)
    fail(ErrorKind::InvalidRoot, "generator " + std::to_string(j + 1) + " has <e,e> != 2");
  LatticeVector out = v;
  out[j] -= pairing_with_generator(lat, j, v);
  return out;
}

struct OrbitResult {
  enum class Tag { Finite, ExceedsBound };
  Tag tag = Tag::Finite;
  std::vector<LatticeVector> elements;  // sorted; populated when Finite
  std::size_t bound = 0;                // populated when ExceedsBound
  /// Element of largest max-norm first found in each BFS layer (growth trace).
  std::vector<LatticeVector> layer_extremes;

  bool finite() const { return tag == Tag::Finite; }
};

inline BigInt max_norm(const LatticeVector& v) {
  BigInt m = 0;
  for (const auto& x : v) m = std::max(m, BigInt(boost::multiprecision::abs(x)));
  return m;
}

/// Breadth-first closure of `start` under all generating reflections.
inline OrbitResult orbit(const GramLattice& lat, const LatticeVector& start, std::size_t max_size) {
  if (max_size < 1) fail(ErrorKind::Input, "orbit bound must be positive");
  std::set<LatticeVector> seen{start};
  std::vector<LatticeVector> layer{start};
  OrbitResult res;
  res.layer_extremes.push_back(start);
  while (!layer.empty()) {
    std::vector<LatticeVector> next;
    for (const auto& v : layer)
      for (std::size_t j = 0; j < lat.rank(); ++j) {
        auto w = reflect(lat, v, j);
        if (seen.insert(w).second) {
          if (seen.size() > max_size) {
            res.tag = OrbitResult::Tag::ExceedsBound;
            res.bound = max_size;
            next.push_back(std::move(w));
            res.layer_extremes.push_back(*std::max_element(
                next.begin(), next.end(), [](const auto& a, const auto& b) { return max_norm(a) < max_norm(b); }));
            return res;
          }
          next.push_back(std::move(w));
        }
      }
    if (!next.empty())
      res.layer_extremes.push_back(*std::max_element(
          next.begin(), next.end(), [](const auto& a, const auto& b) { return max_norm(a) < max_norm(b); }));
    layer = std::move(next);
  }
  res.elements.assign(seen.begin(), seen.end());
  return res;
}

/// Leading principal minors of the Gram matrix, exact.
inline std::vector<Rational> leading_minors(const GramLattice& lat) {
  std::vector<Rational> minors;
  for (std::size_t k = 1; k <= lat.rank(); ++k) {
    std::vector<std::vector<Rational>> sub(k, std::vector<Rational>(k));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) sub[i][j] = Rational(lat(i, j));
    // Local Gaussian elimination to avoid pulling in the polynomial header.
    Rational det = 1;
    for (std::size_t c = 0; c < k && det != 0; ++c) {
      std::size_t p = c;
      while (p < k && sub[p][c] == 0) ++p;
      if (p == k) {
        det = 0;
        break;
      }
      if (p != c) {
        std::swap(sub[p], sub[c]);
        det = -det;
      }
      det *= sub[c][c];
      for (std::size_t r = c + 1; r < k; ++r) {
        Rational f = sub[r][c] / sub[c][c];
        if (f == 0) continue;
        for (std::size_t q = c; q < k; ++q) sub[r][q] -= f * sub[c][q];
      }
    }
    minors.push_back(det);
  }
  return minors;
}

/// Basis of the rational kernel of the Gram matrix, each scaled to a primitive integer
/// vector whose first nonzero coordinate is positive.
inline std::vector<LatticeVector> gram_kernel(const GramLattice& lat) {
  const std::size_t n = lat.rank();
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = Rational(lat(i, j));
  // Reduced row echelon form.
  std::vector<std::size_t> pivot_cols;
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < n; ++col) {
    std::size_t p = row;
    while (p < n && a[p][col] == 0) ++p;
    if (p == n) continue;
    std::swap(a[p], a[row]);
    Rational inv = Rational(1) / a[row][col];
    for (auto& x : a[row]) x *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == row || a[r][col] == 0) continue;
      Rational f = a[r][col];
      for (std::size_t q = 0; q < n; ++q) a[r][q] -= f * a[row][q];
    }
    pivot_cols.push_back(col);
    ++row;
  }
  std::vector<LatticeVector> basis;
  std::vector<bool> is_pivot(n, false);
  for (auto c : pivot_cols) is_pivot[c] = true;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(n, 0);
    v[free] = 1;
    for (std::size_t r = 0; r < pivot_cols.size(); ++r) v[pivot_cols[r]] = -a[r][free];
    BigInt den = 1;
    for (const auto& x : v) den = lcm(den, denominator(x));
    LatticeVector iv(n);
    BigInt g = 0;
    for (std::size_t i = 0; i < n; ++i) {
      iv[i] = numerator(v[i] * den);
      g = gcd(g, iv[i]);
    }
    auto first = std::find_if(iv.begin(), iv.end(), [](const BigInt& x) { return x != 0; });
    if (*first < 0) g = -g;
    for (auto& x : iv) x /= g;
    basis.push_back(std::move(iv));
  }
  return basis;
}

/// Connected components of the graph on {0..N-1} with an edge wherever gram(i,j) != 0.
inline std::vector<std::vector<std::size_t>> irreducible_components(const GramLattice& lat) {
  const std::size_t n = lat.rank();
  std::vector<int> comp(n, -1);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<std::size_t> members;
    std::deque<std::size_t> q{s};
    comp[s] = static_cast<int>(out.size());
    while (!q.empty()) {
      auto v = q.front();
      q.pop_front();
      members.push_back(v);
      for (std::size_t w = 0; w < n; ++w)
        if (w != v && comp[w] < 0 && lat(v, w) != 0) {
          comp[w] = comp[s];
          q.push_back(w);
        }
    }
    std::sort(members.begin(), members.end());
    out.push_back(std::move(members));
  }
  return out;
}

struct FinitenessVerdict {
  bool finite = false;
  /// Positive-definiteness certificate: all leading principal minors.
  std::vector<Rational> leading_minors;
  std::vector<LatticeVector> kernel;
  /// Growth witness for the infinite case: generator index and the per-layer extremes
  /// of its orbit before the cap was hit.
  std::optional<std::size_t> witness_generator;
  std::vector<LatticeVector> witness_vectors;
  std::size_t orbit_cap = 0;
  bool orbit_cap_hit = false;
};

inline constexpr std::size_t kDefaultMaxOrbit = 10000;

/// Decides finiteness of the reflection group through the exact positive-definiteness
/// test. In the infinite case a capped orbit enumeration supplies a growth witness.
inline FinitenessVerdict is_finite(const GramLattice& lat, std::size_t max_orbit = kDefaultMaxOrbit) {
  if (!lat.root_generated()) fail(ErrorKind::InvalidRoot, "Gram diagonal must be all 2");
  FinitenessVerdict v;
  v.leading_minors = leading_minors(lat);
  v.finite = std::all_of(v.leading_minors.begin(), v.leading_minors.end(), [](const Rational& m) { return m > 0; });
  v.kernel = gram_kernel(lat);
  v.orbit_cap = max_orbit;
  if (!v.finite) {
    for (std::size_t j = 0; j < lat.rank(); ++j) {
      auto o = orbit(lat, basis_vector(lat.rank(), j), max_orbit);
      if (!o.finite()) {
        v.witness_generator = j;
        v.witness_vectors = std::move(o.layer_extremes);
        v.orbit_cap_hit = true;
        break;
      }
    }
  }
  return v;
}

/// Exact order of the reflection group by enumerating its elements as integer matrices;
/// std::nullopt when more than `max_order` elements are found.
inline std::optional<std::size_t> group_order_by_enumeration(const GramLattice& lat, std::size_t max_order) {
  const std::size_t n = lat.rank();
  using Matrix = std::vector<BigInt>;  // row-major n x n
  auto identity = [&] {
    Matrix m(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) m[i * n + i] = 1;
    return m;
  };
  std::vector<Matrix> gens;
  for (std::size_t j = 0; j < n; ++j) {
    if (lat(j, j) != 2) fail(ErrorKind::InvalidRoot, "generator without <e,e> = 2");
    Matrix r = identity();
    for (std::size_t l = 0; l < n; ++l) r[j * n + l] -= lat(j, l);
    gens.push_back(std::move(r));
  }
  auto mul = [&](const Matrix& a, const Matrix& b) {
    Matrix c(n * n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        if (a[i * n + k] == 0) continue;
        for (std::size_t j = 0; j < n; ++j) c[i * n + j] += a[i * n + k] * b[k * n + j];
      }
    return c;
  };
  std::set<Matrix> seen{identity()};
  std::deque<Matrix> q{identity()};
  while (!q.empty()) {
    Matrix g = std::move(q.front());
    q.pop_front();
    for (const auto& r : gens) {
      Matrix h = mul(r, g);
      if (seen.insert(h).second) {
        if (seen.size() > max_order) return std::nullopt;
        q.push_back(std::move(h));
      }
    }
  }
  return seen.size();
}

}  // namespace ovalmono::lattice
