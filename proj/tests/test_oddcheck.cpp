#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ovalmono/oddcheck.hpp"

using namespace ovalmono;

namespace {

constexpr double kPi = std::numbers::pi;

// Closed forms: 3-ball cap pi (1 - t)^2 (2 + t) / 3, disk cap acos t - t sqrt(1 - t^2).
double ball3_cap(double r, double t) { return kPi * (r - t) * (r - t) * (2 * r + t) / 3; }
double disk_cap(double t) { return std::acos(t) - t * std::sqrt(1 - t * t); }

}  // namespace

TEST(Oddcheck, ClosedFormCaps) {
  for (double t : {-0.95, -0.3, 0.0, 0.4, 0.9}) {
    EXPECT_NEAR(cap_volume_numeric({3, {1, 1, 1}, t}), ball3_cap(1, t), 1e-12);
    EXPECT_NEAR(cap_volume_numeric({2, {1, 1}, t}), disk_cap(t), 1e-12);
    EXPECT_NEAR(cap_volume_numeric({3, {2, 2, 2}, 2 * t}), ball3_cap(2, 2 * t), 1e-11);
  }
  EXPECT_EQ(cap_volume_numeric({3, {1, 1, 1}, 1.5}), 0.0);
  EXPECT_NEAR(cap_volume_numeric({3, {1, 1, 1}, -1.5}), 4 * kPi / 3, 1e-12);
}

TEST(Oddcheck, EllipsoidVolumes) {
  EXPECT_NEAR(total_volume(3, {1, 2, 3}), 4 * kPi / 3 * 6, 1e-11);
  EXPECT_NEAR(total_volume(4, {1, 1, 1, 1}), kPi * kPi / 2, 1e-12);
  EXPECT_NEAR(total_volume(5, {1, 1, 1, 1, 1}), 8 * kPi * kPi / 15, 1e-12);
}

TEST(Oddcheck, CapsOfOppositeSidesSumToTotal) {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> d(-1, 1);
  for (int n = 1; n <= 6; ++n) {
    std::vector<double> axes(n);
    for (auto& a : axes) a = 0.5 + std::abs(d(rng));
    const double total = total_volume(n, axes);
    for (int k = 0; k < 10; ++k) {
      double t = d(rng) * axes[0];
      EXPECT_NEAR(cap_volume_numeric({n, axes, t}) + cap_volume_numeric({n, axes, -t}), total, 1e-12 * total);
    }
  }
}

TEST(Oddcheck, InputValidation) {
  EXPECT_THROW(cap_volume_numeric({3, {1, 1}, 0}), Error);
  EXPECT_THROW(cap_volume_numeric({0, {}, 0}), Error);
  EXPECT_THROW(cap_volume_numeric({2, {1, -1}, 0}), Error);
}

TEST(Oddcheck, OddDimensionsFitExactly) {
  auto b3 = polynomial_fit_test(3, {1, 1, 1}, 12);
  ASSERT_TRUE(b3.exact_degree.has_value());
  EXPECT_EQ(*b3.exact_degree, 3);
  auto e5 = polynomial_fit_test(5, {1.5, 0.7, 1, 2, 0.9}, 12);
  ASSERT_TRUE(e5.exact_degree.has_value());
  EXPECT_EQ(*e5.exact_degree, 5);
  // The fitted cubic is the closed form.
  for (double t : {-0.8, 0.1, 0.6}) EXPECT_NEAR(b3(t), ball3_cap(1, t), 1e-10);
}

TEST(Oddcheck, EvenDimensionsHaveNoLowDegreeFit) {
  auto d2 = polynomial_fit_test(2, {1, 1}, 12);
  EXPECT_FALSE(d2.exact_degree.has_value());
  auto d4 = polynomial_fit_test(4, {1, 1, 1, 1}, 12);
  EXPECT_FALSE(d4.exact_degree.has_value());
  // Residuals decrease with degree but stay above the threshold.
  EXPECT_GT(d2.rows[3].max_residual, d2.rows[12].max_residual);
  EXPECT_GT(d2.rows[12].max_residual, 1e-8);
}

TEST(Oddcheck, FourValuedCover) {
  for (int n : {1, 3, 5}) EXPECT_TRUE(four_valued_cover_check(n, 1.0).passed) << n;
  EXPECT_TRUE(four_valued_cover_check(3, 0.0).passed);
  EXPECT_TRUE(four_valued_cover_check(3, 1e-3).passed);
  EXPECT_FALSE(four_valued_cover_check(2, 1.0).passed);
}
