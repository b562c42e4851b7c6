#include <gtest/gtest.h>

#include <algorithm>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "ovalmono/tracking.hpp"

using namespace ovalmono;

namespace {

struct Rig {
  PlaneDomain dom;
  std::vector<Complex> bps;
  explicit Rig(DomainSpec spec, DirectionFrame f = {}) : dom(std::move(spec), f), bps(dom.critical().branch_points()) {}
  TrackOptions options() const {
    TrackOptions o;
    o.branch_points = bps;
    return o;
  }
};

// Random closed polygon through the basepoint avoiding discs around the branch points.
ComplexPath random_safe_loop(std::mt19937& rng, Complex base, const std::vector<Complex>& bps, double keep) {
  std::uniform_real_distribution<double> d(-1.5, 1.5);
  for (;;) {
    ComplexPath p;
    Complex z = base;
    for (int k = 0; k < 4; ++k) {
      Complex w = base + Complex(d(rng), d(rng));
      p.segment(z, w);
      z = w;
    }
    p.segment(z, base);
    if (p.clearance(bps) > keep) return p;
  }
}

struct Spiders {
  std::vector<ComplexPath> loops;
  ComplexPath big;
};

// Straight spider legs from a basepoint outside all branch points, in increasing angle
// seen from it, and the counter-clockwise circle through the basepoint enclosing
// everything. The basepoint is off the vertical so that conjugate pairs do not line up.
Spiders spider_loops(std::vector<Complex> bps) {
  Complex c = 0;
  for (auto b : bps) c += b;
  c /= double(bps.size());
  double R = 0;
  for (auto b : bps) R = std::max(R, std::abs(b - c));
  const Complex p = c + std::polar(R + 1, -1.3);
  auto angle = [&](Complex z) { return std::arg((z - p) / (c - p)); };
  std::sort(bps.begin(), bps.end(), [&](Complex a, Complex b) { return angle(a) < angle(b); });
  double r = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < bps.size(); ++i)
    for (std::size_t j = i + 1; j < bps.size(); ++j) r = std::min(r, std::abs(bps[i] - bps[j]));
  r *= 0.3;
  Spiders out;
  for (auto b : bps) {
    Complex foot = b + r * (p - b) / std::abs(p - b);
    ComplexPath leg;
    leg.segment(p, foot);
    ComplexPath l = leg;
    l.circle(b, foot);
    l.append(leg.reversed());
    out.loops.push_back(l);
  }
  out.big.circle(c, p);
  return out;
}

}  // namespace

TEST(Tracking, ConfigValidation) {
  TrackingConfig c;
  c.safety_factor = 0;
  EXPECT_THROW(c.validate(), Error);
  c.safety_factor = 1.5;
  EXPECT_THROW(c.validate(), Error);
}

TEST(Tracking, ConstantPathIsIdentity) {
  Rig s(fixtures::circle());
  auto start = make_fiber<double>(s.dom.numeric(), {0.2, 0.1});
  auto res = track_fiber<double>(s.dom.numeric(), ComplexPath{}, start, TrackingConfig{});
  EXPECT_EQ(res.end.roots, start.roots);
  EXPECT_EQ(res.end.labels, start.labels);
}

TEST(Tracking, CircleSegmentMatchesClosedForm) {
  Rig s(fixtures::circle());
  auto start = make_fiber<double>(s.dom.numeric(), {0.0, 0.0});
  ComplexPath p;
  p.segment({0, 0}, {0.5, 0});
  auto res = track_fiber<double>(s.dom.numeric(), p, start, TrackingConfig{}, s.options());
  ASSERT_EQ(res.end.roots.size(), 2u);
  EXPECT_NEAR(res.end.roots[0].real(), -std::sqrt(0.75), 1e-12);
  EXPECT_NEAR(res.end.roots[1].real(), std::sqrt(0.75), 1e-12);
  EXPECT_EQ(res.end.labels, (std::vector<int>{0, 1}));
  EXPECT_LT(res.max_residual, 1e-10);
}

TEST(Tracking, CircleLoopAroundBranchPointSwaps) {
  Rig s(fixtures::circle());
  ComplexPath loop;
  loop.circle({1, 0}, {0.5, 0});
  EXPECT_EQ(loop_permutation<double>(s.dom.numeric(), loop, TrackingConfig{}, s.options()), (Permutation{1, 0}));
}

TEST(Tracking, CircleLoopAroundBothBranchPointsIsIdentity) {
  Rig s(fixtures::circle());
  ComplexPath loop;
  loop.circle({0, 0}, {2, 0});
  EXPECT_EQ(loop_permutation<double>(s.dom.numeric(), loop, TrackingConfig{}, s.options()), identity_permutation(2));
  ComplexPath empty_loop;
  empty_loop.circle({3, 0}, {3.5, 0});
  EXPECT_EQ(loop_permutation<double>(s.dom.numeric(), empty_loop, TrackingConfig{}, s.options()),
            identity_permutation(2));
}

TEST(Tracking, PathTooCloseToBranchPointFails) {
  Rig s(fixtures::circle());
  ComplexPath p;
  p.segment({0, 0}, {0.99, 0});
  auto start = make_fiber<double>(s.dom.numeric(), {0.0, 0.0});
  try {
    track_fiber<double>(s.dom.numeric(), p, start, TrackingConfig{}, s.options());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Tracking);
  }
}

TEST(Tracking, ReversalIdentity) {
  for (auto spec : {fixtures::circle(), fixtures::ellipse()}) {
    Rig s(spec);
    std::mt19937 rng(1);
    TrackingConfig cfg;
    for (int trial = 0; trial < 5; ++trial) {
      auto loop = random_safe_loop(rng, {0.1, 0.05}, s.bps, 0.3);
      ComplexPath open(std::vector<PathPiece>(loop.pieces().begin(), loop.pieces().begin() + 3));
      auto start = make_fiber<double>(s.dom.numeric(), open.start());
      auto there = track_fiber<double>(s.dom.numeric(), open, start, cfg, s.options());
      auto back = track_fiber<double>(s.dom.numeric(), open.reversed(), there.end, cfg, s.options());
      for (std::size_t i = 0; i < start.roots.size(); ++i)
        EXPECT_LT(std::abs(back.end.roots[i] - start.roots[i]), 10 * cfg.newton_tol);
    }
  }
}

TEST(Tracking, PermutationInvariantUnderHalvedSteps) {
  Rig s(fixtures::peanut(), fixtures::peanut_direction());
  const double nu = default_nu(s.dom.critical());
  auto loops = standard_loops(s.dom.critical(), s.dom.critical().m + nu / 2, nu);
  TrackingConfig fine;
  fine.initial_step /= 2;
  fine.min_step /= 2;
  fine.max_step /= 2;
  for (const auto& l : loops)
    EXPECT_EQ(loop_permutation<double>(s.dom.numeric(), l, TrackingConfig{}, s.options()),
              loop_permutation<double>(s.dom.numeric(), l, fine, s.options()));
}

TEST(Tracking, StandardLoopsOnCircle) {
  Rig s(fixtures::circle());
  auto loops = standard_loops(s.dom.critical(), 0.0, 0.5);
  ASSERT_EQ(loops.size(), 2u);
  for (const auto& l : loops) {
    EXPECT_TRUE(l.is_closed());
    EXPECT_TRUE(l.is_connected());
    EXPECT_EQ(loop_permutation<double>(s.dom.numeric(), l, TrackingConfig{}, s.options()), (Permutation{1, 0}));
  }
  EXPECT_THROW(standard_loops(s.dom.critical(), 0.0, 1.0), Error);
}

TEST(Tracking, StandardLoopsRejectBasepointOnCriticalValue) {
  CriticalData cd;
  for (double t : {-1.0, 0.0, 1.0}) {
    CriticalValue v;
    v.t = {t, 0.0};
    v.is_real = true;
    v.on_oval = true;
    cd.oval.push_back(cd.values.size());
    cd.values.push_back(v);
  }
  cd.m = -1;
  cd.M = 1;
  try {
    standard_loops(cd, 0.0, 0.2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Input);
  }
}

TEST(Tracking, SpiderLoopsComposeToLargeCircle) {
  for (auto [spec, f] : {std::pair{fixtures::circle(), DirectionFrame{}},
                         std::pair{fixtures::peanut(), fixtures::peanut_direction()}}) {
    Rig s(spec, f);
    auto spiders = spider_loops(s.bps);
    Permutation total = identity_permutation(s.dom.numeric().degree());
    for (const auto& l : spiders.loops)
      total = compose_then(total, loop_permutation<double>(s.dom.numeric(), l, TrackingConfig{}, s.options()));
    EXPECT_EQ(total, loop_permutation<double>(s.dom.numeric(), spiders.big, TrackingConfig{}, s.options()));
  }
}
