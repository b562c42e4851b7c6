#include <gtest/gtest.h>

#include <numbers>

#include "fixtures.hpp"
#include "ovalmono/picard_lefschetz.hpp"

using namespace ovalmono;

namespace {

constexpr double kPi = std::numbers::pi;

PlaneDomain circle_dom() { return PlaneDomain(fixtures::circle(), DirectionFrame{}); }
PlaneDomain peanut_dom() { return PlaneDomain(fixtures::peanut(), fixtures::peanut_direction()); }

lattice::LatticeVector vec(std::initializer_list<long long> xs) { return lattice::LatticeVector(xs.begin(), xs.end()); }

}  // namespace

TEST(PicardLefschetz, CircleCyclesAndGram) {
  auto dom = circle_dom();
  auto base = make_base(dom);
  EXPECT_NEAR(base.basepoint, 0.0, 1e-12);
  auto cyc = vanishing_cycles(dom, base);
  ASSERT_EQ(cyc.size(), 2u);
  for (const auto& c : cyc) EXPECT_NEAR(c.collision_ratio, 2.0, 0.1);
  auto F = gram_of_cycles(cyc, base.fiber.roots.size());
  EXPECT_EQ(F.gram, lattice::GramLattice::from_ints({{2, -2}, {-2, 2}}));
  EXPECT_FALSE(lattice::is_finite(F.gram).finite);
}

TEST(PicardLefschetz, SingleCycleGram) {
  VanishingCycle0 c;
  c.plus_label = 1;
  c.minus_label = 0;
  auto F = gram_of_cycles({c}, 2);
  EXPECT_EQ(F.gram, lattice::GramLattice::from_ints({{2}}));
  EXPECT_EQ(pl_reflect(F, vec({1}), 0), vec({-1}));
  EXPECT_THROW(gram_of_cycles({}, 2), Error);
}

TEST(PicardLefschetz, ReflectionFormula) {
  // delta_0 = e1 - e0, delta_1 = e2 - e1 on three points: <d0, d1> = -1.
  VanishingCycle0 a, b;
  a.plus_label = 1;
  a.minus_label = 0;
  b.plus_label = 2;
  b.minus_label = 1;
  auto F = gram_of_cycles({a, b}, 3);
  EXPECT_EQ(F.gram, lattice::GramLattice::from_ints({{2, -1}, {-1, 2}}));
  // gamma -> gamma + <gamma, delta_j> delta_j with the plane sign factor +1, acting on
  // coordinates: the reflection of d0 in d1 is d0 + d1.
  EXPECT_EQ(pl_reflect(F, vec({1, 0}), 1), vec({1, 1}));
  EXPECT_EQ(pl_reflect(F, vec({1, 1}), 0), vec({0, 1}));
}

TEST(PicardLefschetz, CircleBoundaryAndCertificate) {
  auto dom = circle_dom();
  auto base = make_base(dom);
  auto F = gram_of_cycles(vanishing_cycles(dom, base), base.fiber.roots.size());
  auto bd = boundary_class(dom, base);
  EXPECT_EQ(std::count(bd.begin(), bd.end(), 1), 1);
  EXPECT_EQ(std::count(bd.begin(), bd.end(), -1), 1);
  auto cert = kernel_certificate(F, bd, base.basepoint);
  EXPECT_EQ(cert.eps, (std::vector<int>{1, 1}));
  for (const auto& x : cert.gram_times_eps) EXPECT_EQ(x, 0);
}

TEST(PicardLefschetz, CorruptedCyclesFailCertificate) {
  auto dom = circle_dom();
  auto base = make_base(dom);
  auto cyc = vanishing_cycles(dom, base);
  cyc.pop_back();
  auto F = gram_of_cycles(cyc, base.fiber.roots.size());
  try {
    kernel_certificate(F, boundary_class(dom, base), base.basepoint);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Certificate);
  }
}

TEST(PicardLefschetz, CircleGermsSumToArea) {
  auto dom = circle_dom();
  auto a = analyze_lattice(dom);
  ASSERT_TRUE(a.certificate.has_value());
  ASSERT_EQ(a.germs_at_base.size(), 2u);
  for (auto g : a.germs_at_base) EXPECT_NEAR(g.real(), kPi / 2, 1e-9);
  EXPECT_NEAR(a.certified_total.real(), kPi, 1e-9);
  EXPECT_NEAR(a.certified_partial.real(), kPi / 2, 1e-9);
  EXPECT_TRUE(a.consistency.consistent);
}

TEST(PicardLefschetz, PeanutPipeline) {
  auto dom = peanut_dom();
  auto a = analyze_lattice(dom);
  ASSERT_EQ(a.cycles.size(), 6u);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(a.lattice.gram(i, i), 2);
    for (std::size_t j = 0; j < 6; ++j) EXPECT_EQ(a.lattice.gram(i, j), a.lattice.gram(j, i));
  }
  EXPECT_FALSE(a.finiteness.finite);
  ASSERT_TRUE(a.certificate.has_value()) << a.certificate_error;
  const double area = total_area(dom);
  EXPECT_NEAR(a.certified_total.real() / area, 1.0, 1e-8);
  EXPECT_NEAR(a.certified_partial.real(), area_direct(dom, a.base.basepoint), 1e-8 * area);
  EXPECT_TRUE(a.consistency.consistent);
  for (const auto& c : a.components) EXPECT_TRUE(c.in_kernel);
}

TEST(PicardLefschetz, TorusMatrixComponents) {
  auto g = lattice::GramLattice::from_ints({{2, -2, 0, 0}, {-2, 2, 0, 0}, {0, 0, 2, -2}, {0, 0, -2, 2}});
  auto comps = component_kernel_sums(g, {1, 1, 1, 1});
  ASSERT_EQ(comps.size(), 2u);
  EXPECT_TRUE(comps[0].in_kernel);
  EXPECT_TRUE(comps[1].in_kernel);
  EXPECT_EQ(comps[0].sum, vec({1, 1, 0, 0}));
  auto bad = component_kernel_sums(g, {1, -1, 1, 1});
  EXPECT_FALSE(bad[0].in_kernel);
  EXPECT_TRUE(bad[1].in_kernel);
}

TEST(PicardLefschetz, GermsVanishWithExponentThreeHalves) {
  for (auto dom : {circle_dom(), peanut_dom()}) {
    auto base = make_base(dom);
    for (const auto& c : vanishing_cycles(dom, base)) {
      auto fit = asymptotic_slope(dom, c, base.nu);
      EXPECT_NEAR(fit.slope, 1.5, 0.05) << c.origin;
    }
  }
}

TEST(PicardLefschetz, CircleLocalGermClosedForm) {
  // Near t = -1 the germ is the area of the cap {x <= -1 + h}.
  auto dom = circle_dom();
  auto base = make_base(dom);
  auto cyc = vanishing_cycles(dom, base);
  const double h = 0.1, t = -1 + h;
  const double cap = t * std::sqrt(1 - t * t) + std::asin(t) + kPi / 2;
  EXPECT_NEAR(std::abs(local_germ_value(dom, cyc[0], h)), cap, 1e-10);
}

TEST(PicardLefschetz, SignSearchCap) {
  std::vector<VanishingCycle0> many(21);
  for (std::size_t j = 0; j < many.size(); ++j) {
    many[j].plus_label = static_cast<int>(j + 1);
    many[j].minus_label = static_cast<int>(j);
  }
  auto F = gram_of_cycles(many, 22);
  try {
    kernel_certificate(F, ZeroCycle(22, 0), 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Certificate);
  }
}
