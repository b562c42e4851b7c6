#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "ovalmono/path.hpp"

using namespace ovalmono;

TEST(Path, SerializeParseRoundTrip) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> d(-3, 3);
  for (int trial = 0; trial < 20; ++trial) {
    ComplexPath p;
    p.segment({d(rng), d(rng)}, {d(rng), d(rng)});
    p.arc({d(rng), d(rng)}, std::abs(d(rng)) + 0.1, d(rng), d(rng));
    p.line_to({d(rng) / 7, d(rng) / 3});
    EXPECT_EQ(parse_path(serialize(p)), p);
  }
}

TEST(Path, ParseErrors) {
  for (const char* bad : {"segment 0 0 1", "arc 0 0 1 0", "spiral 0 0 1 0 1", "segment 0 0 1 1 extra", "segment a b c d"}) {
    try {
      parse_path(bad);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::Parse) << bad;
    }
  }
  EXPECT_TRUE(parse_path("# comment only\n\n").empty());
}

TEST(Path, CircleIsClosedAndReversalSwapsEnds) {
  ComplexPath p;
  p.segment({0.5, 0}, {0.9, 0}).circle({1, 0}, {0.9, 0}).segment({0.9, 0}, {0.5, 0});
  EXPECT_TRUE(p.is_closed());
  EXPECT_TRUE(p.is_connected());
  EXPECT_NEAR(p.length(), 0.8 + 2 * std::numbers::pi * 0.1, 1e-12);
  auto r = p.reversed();
  EXPECT_NEAR(std::abs(r.start() - p.end()), 0, 1e-15);
  EXPECT_TRUE(r.is_connected());
  EXPECT_NEAR(r.clearance({{1, 0}}), 0.1, 1e-12);
}

TEST(Path, ClearanceOfPartialArc) {
  ComplexPath p;
  p.arc({0, 0}, 1, 0, std::numbers::pi);  // upper half circle
  EXPECT_NEAR(p.clearance({{0, 1.5}}), 0.5, 1e-12);
  // Below the arc only the endpoints are near.
  EXPECT_NEAR(p.clearance({{0, -1.5}}), std::hypot(1.0, 1.5), 1e-12);
}
