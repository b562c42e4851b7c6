#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "ovalmono/curve.hpp"

using namespace ovalmono;

namespace {

// Extrema of t(th) = r(th) (a cos th + b sin th) on the peanut, located by sampling and
// golden-section refinement.
std::vector<double> peanut_extrema_polar(double a, double b) {
  auto t = [&](double th) {
    double c = std::cos(2 * th);
    double r = std::sqrt(c + std::sqrt(c * c + 0.2));
    return r * (a * std::cos(th) + b * std::sin(th));
  };
  const int N = 4000;
  std::vector<double> out;
  for (int i = 0; i < N; ++i) {
    double h = 2 * std::numbers::pi / N;
    double th0 = i * h, th1 = th0 + h, thm = th0 - h;
    double f0 = t(th0), fp = t(th1), fm = t(thm);
    if ((f0 > fp && f0 >= fm) || (f0 < fp && f0 <= fm)) {
      double sign = f0 > fp ? -1 : 1;  // minimise sign * t
      double lo = thm, hi = th1;
      const double g = (std::sqrt(5.0) - 1) / 2;
      for (int it = 0; it < 200; ++it) {
        double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
        if (sign * t(x1) < sign * t(x2))
          hi = x2;
        else
          lo = x1;
      }
      out.push_back(t(0.5 * (lo + hi)));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(Curve, CircleDiscriminantAndCriticalValues) {
  PlaneDomain dom(fixtures::circle(), DirectionFrame{});
  const auto& cd = dom.critical();
  EXPECT_EQ(cd.discriminant, RationalPoly({Rational(-1), Rational(0), Rational(1)}));
  ASSERT_EQ(cd.values.size(), 2u);
  EXPECT_NEAR(cd.m, -1.0, 1e-12);
  EXPECT_NEAR(cd.M, 1.0, 1e-12);
  ASSERT_EQ(cd.oval.size(), 2u);
  EXPECT_EQ(cd.values[cd.oval[0]].kind, 1);
  EXPECT_EQ(cd.values[cd.oval[1]].kind, -1);
  EXPECT_NEAR(cd.values[cd.oval[0]].s, 0.0, 1e-9);
}

TEST(Curve, CircleSlice) {
  PlaneDomain dom(fixtures::circle(), DirectionFrame{});
  auto sl = real_slice(dom, 0.3);
  ASSERT_EQ(sl.size(), 1u);
  EXPECT_NEAR(sl[0].lower, -std::sqrt(0.91), 1e-12);
  EXPECT_NEAR(sl[0].upper, std::sqrt(0.91), 1e-12);
  EXPECT_TRUE(real_slice(dom, 1.2).empty());
  EXPECT_TRUE(real_slice(dom, -1.0).empty());
}

TEST(Curve, FrameRoundTripAndScale) {
  DirectionFrame f{Rational(3), Rational(-2)};
  auto [t, s] = f.to_frame(Rational(5, 7), Rational(-1, 3));
  auto [x, y] = f.from_frame(t, s);
  EXPECT_EQ(x, Rational(5, 7));
  EXPECT_EQ(y, Rational(-1, 3));
  EXPECT_EQ(f.area_scale(), Rational(1, 13));
}

TEST(Curve, FramedCurveAgreesWithOriginal) {
  auto spec = fixtures::peanut();
  DirectionFrame f = fixtures::peanut_direction();
  FramedCurve fc(spec.f, f);
  // Evaluate g(t, s) and f(x, y) at matching points.
  for (int i = -3; i <= 3; ++i) {
    Rational t(i, 4), s(2 - i, 5);
    Rational g = 0;
    for (int k = 0; k <= fc.s_degree(); ++k) {
      Rational sk = 1;
      for (int e = 0; e < k; ++e) sk *= s;
      g += fc.s_coefficient(k)(t) * sk;
    }
    auto [x, y] = f.from_frame(t, s);
    EXPECT_EQ(g, spec.f(x, y));
  }
}

TEST(Curve, EllipseCriticalValues) {
  PlaneDomain dom(fixtures::ellipse(), DirectionFrame{});
  EXPECT_NEAR(dom.critical().m, -2.0, 1e-12);
  EXPECT_NEAR(dom.critical().M, 2.0, 1e-12);
}

TEST(Curve, PeanutCriticalValuesMatchPolarOracle) {
  auto f = fixtures::peanut_direction();
  PlaneDomain dom(fixtures::peanut(), f);
  auto vals = dom.critical().oval_values();
  auto oracle = peanut_extrema_polar(0.1, 1.0);
  ASSERT_EQ(oracle.size(), 6u);
  ASSERT_EQ(vals.size(), oracle.size());
  for (std::size_t k = 0; k < vals.size(); ++k) EXPECT_NEAR(vals[k], oracle[k], 1e-9);
  EXPECT_EQ(dom.critical().values[dom.critical().oval.front()].kind, 1);
  EXPECT_EQ(dom.critical().values[dom.critical().oval.back()].kind, -1);
}

TEST(Curve, PeanutSliceHasTwoIntervalsInTheMiddle) {
  PlaneDomain dom(fixtures::peanut(), fixtures::peanut_direction());
  auto vals = dom.critical().oval_values();
  EXPECT_EQ(real_slice(dom, 0.5 * (vals[0] + vals[1])).size(), 1u);
  EXPECT_EQ(real_slice(dom, 0.5 * (vals[1] + vals[2])).size(), 2u);
}

TEST(Curve, SymmetricDirectionIsNotGeneric) {
  // In direction (0, 1) the two maxima of the peanut share a value.
  auto rep = genericity_check(fixtures::peanut(), DirectionFrame{Rational(0), Rational(1)});
  EXPECT_FALSE(rep.passed);
  EXPECT_FALSE(rep.issues.empty());
}

TEST(Curve, SquaredCircleIsNotGeneric) {
  EXPECT_FALSE(genericity_check(fixtures::squared_circle(), DirectionFrame{}).passed);
  try {
    PlaneDomain dom(fixtures::squared_circle(), DirectionFrame{});
    FAIL() << "expected a genericity error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Genericity);
  }
}

TEST(Curve, ZeroDirectionIsDegenerate) {
  try {
    PlaneDomain dom(fixtures::circle(), DirectionFrame{Rational(0), Rational(0)});
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateDirection);
  }
}

TEST(Curve, ChooseGenericFrameRepairsSymmetricDirection) {
  auto f = choose_generic_frame(fixtures::peanut(), DirectionFrame{Rational(0), Rational(1)});
  EXPECT_TRUE(genericity_check(fixtures::peanut(), f).passed);
  EXPECT_FALSE(f.a == 0 && f.b == 1);
  EXPECT_TRUE(genericity_check(fixtures::peanut(), fixtures::peanut_direction()).passed);
}

TEST(Curve, SeedOnCurveRejected) {
  auto spec = fixtures::circle();
  spec.seed_x = 1;
  EXPECT_THROW(PlaneDomain(spec, DirectionFrame{}), Error);
}
