#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "ovalmono/lattice.hpp"

using namespace ovalmono;
using namespace ovalmono::lattice;

namespace {

GramLattice a1xa1() { return GramLattice::from_ints({{2, 0}, {0, 2}}); }
GramLattice a2() { return GramLattice::from_ints({{2, -1}, {-1, 2}}); }
GramLattice a3() { return GramLattice::from_ints({{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}}); }
GramLattice torus4() { return GramLattice::from_ints({{2, -2, 0, 0}, {-2, 2, 0, 0}, {0, 0, 2, -2}, {0, 0, -2, 2}}); }
GramLattice circle_pair() { return GramLattice::from_ints({{2, -2}, {-2, 2}}); }

LatticeVector vec(std::initializer_list<long long> xs) { return LatticeVector(xs.begin(), xs.end()); }

// Group order through the permutation action on the (finite) root set, independent of the
// matrix enumeration in the library.
std::size_t order_via_root_permutations(const GramLattice& lat) {
  std::set<LatticeVector> roots;
  for (std::size_t j = 0; j < lat.rank(); ++j) {
    auto o = orbit(lat, basis_vector(lat.rank(), j), 1000);
    EXPECT_TRUE(o.finite());
    roots.insert(o.elements.begin(), o.elements.end());
  }
  std::vector<LatticeVector> rs(roots.begin(), roots.end());
  std::map<LatticeVector, std::size_t> index;
  for (std::size_t i = 0; i < rs.size(); ++i) index[rs[i]] = i;
  using Perm = std::vector<std::size_t>;
  std::vector<Perm> gens;
  for (std::size_t j = 0; j < lat.rank(); ++j) {
    Perm p(rs.size());
    for (std::size_t i = 0; i < rs.size(); ++i) p[i] = index.at(reflect(lat, rs[i], j));
    gens.push_back(p);
  }
  Perm id(rs.size());
  for (std::size_t i = 0; i < id.size(); ++i) id[i] = i;
  std::set<Perm> seen{id};
  std::vector<Perm> todo{id};
  while (!todo.empty()) {
    Perm g = todo.back();
    todo.pop_back();
    for (const auto& s : gens) {
      Perm h(g.size());
      for (std::size_t i = 0; i < g.size(); ++i) h[i] = s[g[i]];
      if (seen.insert(h).second) todo.push_back(h);
    }
  }
  return seen.size();
}

}  // namespace

TEST(Lattice, ConstructorRejectsNonSymmetric) {
  EXPECT_THROW(GramLattice::from_ints({{2, -1}, {0, 2}}), Error);
  EXPECT_THROW(GramLattice::from_ints({{2, -1}}), Error);
}

TEST(Lattice, ReflectExamples) {
  auto g = a2();
  EXPECT_EQ(reflect(g, vec({1, 0}), 0), vec({-1, 0}));
  EXPECT_EQ(reflect(g, vec({1, 0}), 1), vec({1, 1}));
  auto c = circle_pair();
  // e1 reflected in e2 with <e2, e1> = -2.
  EXPECT_EQ(reflect(c, vec({1, 0}), 1), vec({1, 2}));
  // A kernel vector is fixed.
  EXPECT_EQ(reflect(c, vec({1, 1}), 0), vec({1, 1}));
}

TEST(Lattice, ReflectRejectsNonRoot) {
  auto g = GramLattice::from_ints({{4, 0}, {0, 2}});
  EXPECT_THROW(reflect(g, vec({1, 0}), 0), Error);
  try {
    reflect(g, vec({1, 0}), 0);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidRoot);
  }
}

TEST(Lattice, ReflectionIsIsometricInvolution) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> d(-5, 5);
  for (const auto& g : {a2(), a3(), torus4(), circle_pair()}) {
    for (int trial = 0; trial < 50; ++trial) {
      LatticeVector u(g.rank()), v(g.rank());
      for (auto& x : u) x = d(rng);
      for (auto& x : v) x = d(rng);
      for (std::size_t j = 0; j < g.rank(); ++j) {
        EXPECT_EQ(reflect(g, reflect(g, v, j), j), v);
        EXPECT_EQ(pairing(g, reflect(g, u, j), reflect(g, v, j)), pairing(g, u, v));
      }
    }
  }
}

TEST(Lattice, OrbitFiniteAndBounded) {
  auto o = orbit(a2(), vec({1, 0}), 100);
  ASSERT_TRUE(o.finite());
  EXPECT_EQ(o.elements.size(), 6u);  // the six roots of A2
  auto inf = orbit(circle_pair(), vec({1, 0}), 50);
  EXPECT_FALSE(inf.finite());
  EXPECT_EQ(inf.bound, 50u);
  EXPECT_GT(max_norm(inf.layer_extremes.back()), max_norm(inf.layer_extremes.front()));
}

TEST(Lattice, FinitenessVerdicts) {
  EXPECT_TRUE(is_finite(a2()).finite);
  EXPECT_TRUE(is_finite(a3()).finite);
  EXPECT_TRUE(is_finite(a1xa1()).finite);
  auto v = is_finite(circle_pair());
  EXPECT_FALSE(v.finite);
  EXPECT_TRUE(v.orbit_cap_hit);
  ASSERT_EQ(v.kernel.size(), 1u);
  EXPECT_EQ(v.kernel[0], vec({1, 1}));
}

TEST(Lattice, LeadingMinorsOfA3) {
  auto m = leading_minors(a3());
  ASSERT_EQ(m.size(), 3u);
  EXPECT_EQ(m[0], 2);
  EXPECT_EQ(m[1], 3);
  EXPECT_EQ(m[2], 4);
}

TEST(Lattice, TorusMatrixKernelAndComponents) {
  auto g = torus4();
  auto v = is_finite(g);
  EXPECT_FALSE(v.finite);
  ASSERT_EQ(v.kernel.size(), 2u);
  EXPECT_EQ(v.kernel[0], vec({1, 1, 0, 0}));
  EXPECT_EQ(v.kernel[1], vec({0, 0, 1, 1}));
  // Kernel oracle: every basis vector pairs to zero with every generator.
  for (const auto& k : v.kernel)
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(pairing_with_generator(g, j, k), 0);
  auto comps = irreducible_components(g);
  ASSERT_EQ(comps.size(), 2u);
  EXPECT_EQ(comps[0], (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(comps[1], (std::vector<std::size_t>{2, 3}));
}

TEST(Lattice, EnumerationMatchesRootPermutationOracle) {
  for (const auto& g : {a2(), a1xa1(), a3()}) {
    auto order = group_order_by_enumeration(g, 1000);
    ASSERT_TRUE(order.has_value());
    EXPECT_EQ(*order, order_via_root_permutations(g));
    EXPECT_TRUE(is_finite(g).finite);
  }
  EXPECT_EQ(*group_order_by_enumeration(a2(), 1000), 6u);
  EXPECT_EQ(*group_order_by_enumeration(a1xa1(), 1000), 4u);
  EXPECT_EQ(*group_order_by_enumeration(a3(), 1000), 24u);
  EXPECT_FALSE(group_order_by_enumeration(circle_pair(), 200).has_value());
}

TEST(Lattice, PositiveDefiniteIffEnumerationFinite) {
  // Random rank-3 root-generated forms with off-diagonal entries in {-1, 0, 1}.
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> d(-1, 1);
  for (int trial = 0; trial < 30; ++trial) {
    int a = d(rng), b = d(rng), c = d(rng);
    auto g = GramLattice::from_ints({{2, a, b}, {a, 2, c}, {b, c, 2}});
    bool finite = is_finite(g, 2000).finite;
    bool enumerated = group_order_by_enumeration(g, 2000).has_value();
    EXPECT_EQ(finite, enumerated) << a << " " << b << " " << c;
  }
}
