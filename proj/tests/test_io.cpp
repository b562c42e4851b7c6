#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "ovalmono/report.hpp"

using namespace ovalmono;

namespace {

std::string fixture(const std::string& name) { return std::string(OVALMONO_FIXTURES) + "/" + name; }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::Input;
}

}  // namespace

TEST(Io, CurveFilesParse) {
  EXPECT_EQ(read_curve_file(fixture("circle.curve")).f, fixtures::circle().f);
  EXPECT_EQ(read_curve_file(fixture("peanut.curve")).f, fixtures::peanut().f);
  auto e = read_curve_file(fixture("ellipse.curve"));
  EXPECT_EQ(e.f, fixtures::ellipse().f);
  EXPECT_EQ(parse_curve(format_curve(e)).f, e.f);
}

TEST(Io, CurveParseErrors) {
  EXPECT_EQ(kind_of([] { read_curve_file(fixture("malformed.curve")); }), ErrorKind::Parse);
  EXPECT_EQ(kind_of([] { parse_curve("2 0 1\n0 2 1\n0 0 -1\n"); }), ErrorKind::Parse);
  EXPECT_EQ(kind_of([] { parse_curve("2 0 1\nseed 0 0\nseed 1 1\n"); }), ErrorKind::Parse);
  EXPECT_EQ(kind_of([] { parse_curve("2 0 1/0\nseed 0 0\n"); }), ErrorKind::Parse);
  EXPECT_EQ(kind_of([] { parse_curve("-1 0 1\nseed 0 0\n"); }), ErrorKind::Parse);
  EXPECT_EQ(kind_of([] { parse_curve("2 0 1\n2 0 -1\nseed 0 0\n"); }), ErrorKind::Parse);
  EXPECT_EQ(kind_of([] { read_curve_file(fixture("missing.curve")); }), ErrorKind::Parse);
}

TEST(Io, GramFiles) {
  auto g = read_gram_file(fixture("a2.gram"));
  EXPECT_EQ(g, lattice::GramLattice::from_ints({{2, -1}, {-1, 2}}));
  EXPECT_EQ(parse_gram(format_gram(g)), g);
  EXPECT_EQ(kind_of([] { read_gram_file(fixture("nonsymmetric.gram")); }), ErrorKind::Parse);
  EXPECT_EQ(kind_of([] { parse_gram("2\n2 -1\n-1\n"); }), ErrorKind::Parse);
  EXPECT_EQ(kind_of([] { parse_gram("x"); }), ErrorKind::Parse);
  EXPECT_EQ(kind_of([] { parse_gram(""); }), ErrorKind::Parse);
}

TEST(Io, ExitCodes) {
  EXPECT_EQ(exit_code(ErrorKind::Genericity), 2);
  EXPECT_EQ(exit_code(ErrorKind::DegenerateDirection), 2);
  EXPECT_EQ(exit_code(ErrorKind::Tracking), 3);
  EXPECT_EQ(exit_code(ErrorKind::DegreeDrop), 3);
  EXPECT_EQ(exit_code(ErrorKind::VanishingCycleCrossing), 3);
  EXPECT_EQ(exit_code(ErrorKind::Parse), 4);
  EXPECT_EQ(exit_code(ErrorKind::Certificate), 1);
}

TEST(Io, ExplicitNonGenericDirectionIsRejected) {
  AnalysisConfig cfg;
  cfg.direction = DirectionFrame{Rational(0), Rational(1)};
  EXPECT_EQ(kind_of([&] { resolve_direction(fixtures::peanut(), cfg); }), ErrorKind::Genericity);
  cfg.direction = DirectionFrame{Rational(0), Rational(0)};
  EXPECT_EQ(kind_of([&] { resolve_direction(fixtures::circle(), cfg); }), ErrorKind::DegenerateDirection);
  EXPECT_EQ(kind_of([&] { analyze(fixtures::squared_circle(), AnalysisConfig{}); }), ErrorKind::Genericity);
}

TEST(Io, ReflectionReportOnTorusMatrix) {
  auto r = reflection_report(read_gram_file(fixture("torus4.gram")), 2000);
  EXPECT_FALSE(r["finiteness"]["finite"].get<bool>());
  EXPECT_EQ(r["finiteness"]["kernel_rank"].get<int>(), 2);
  EXPECT_EQ(r["finiteness"]["components"].dump(), "[[1,2],[3,4]]");
}
