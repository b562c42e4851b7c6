#pragma once

#include "ovalmono/curve.hpp"

namespace fixtures {

using ovalmono::BivariatePoly;
using ovalmono::DirectionFrame;
using ovalmono::DomainSpec;
using ovalmono::Rational;

inline DomainSpec circle() { return {BivariatePoly({{2, 0, 1}, {0, 2, 1}, {0, 0, -1}}), 0, 0}; }

inline DomainSpec ellipse() { return {BivariatePoly({{2, 0, Rational(1, 4)}, {0, 2, 1}, {0, 0, -1}}), 0, 0}; }

// (x^2 + y^2)^2 - 2x^2 + 2y^2 - 1/5, in polar form r^2 = cos 2th + sqrt(cos^2 2th + 1/5).
inline DomainSpec peanut() {
  return {BivariatePoly({{4, 0, 1}, {2, 2, 2}, {0, 4, 1}, {2, 0, -2}, {0, 2, 2}, {0, 0, Rational(-1, 5)}}), 1, 0};
}
inline DirectionFrame peanut_direction() { return {Rational(1, 10), 1}; }

inline DomainSpec squared_circle() {
  auto c = circle();
  return {c.f * c.f, 0, 0};
}

}  // namespace fixtures
