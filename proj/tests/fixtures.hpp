#pragma once

// shared fixtures: the three-vertex monomial algebra used by the golden
// values, its standard modules, and a couple of stress algebras

#include "glitlab/glit.hpp"

namespace fixtures {

using namespace glitlab;
using exactlin::Mat;
using repcat::Module;

inline const char* kGoldenText =
    "field 101\n"
    "vertices 1 2 3\n"
    "arrow a 1 1\n"
    "arrow b 1 2\n"
    "arrow c 2 3\n"
    "nilpotency 2\n"
    "relations\n"
    "a*a\n"
    "a*b\n"
    "b*c\n";

inline algebra::AlgebraPtr golden_algebra() {
  return algebra::parse_algebra(kGoldenText, "T");
}

inline Module S1(const algebra::AlgebraPtr& T) {
  return Module{T, {1, 0, 0}, {Mat(1, 1), Mat(0, 1), Mat(0, 0)}};
}
inline Module S2(const algebra::AlgebraPtr& T) {
  return Module{T, {0, 1, 0}, {Mat(0, 0), Mat(1, 0), Mat(0, 1)}};
}
inline Module S3(const algebra::AlgebraPtr& T) {
  return Module{T, {0, 0, 1}, {Mat(0, 0), Mat(0, 0), Mat(1, 0)}};
}
inline Module I2(const algebra::AlgebraPtr& T) {
  Mat fb(1, 1);
  fb.at(0, 0) = 1;
  return Module{T, {1, 1, 0}, {Mat(1, 1), fb, Mat(0, 1)}};
}

// skew-commuting square-zero algebra on three loops; dimension 8
inline algebra::AlgebraPtr exterior3() {
  return algebra::parse_algebra(
      "field 101\n"
      "vertices 1\n"
      "arrow x 1 1\n"
      "arrow y 1 1\n"
      "arrow z 1 1\n"
      "nilpotency 4\n"
      "relations\n"
      "x*x\n"
      "y*y\n"
      "z*z\n"
      "x*y + y*x\n"
      "x*z + z*x\n"
      "y*z + z*y\n",
      "E3");
}

inline algebra::AlgebraPtr point_algebra(std::uint32_t p = 101) {
  return algebra::parse_algebra(
      "field " + std::to_string(p) + "\nvertices 1\nnilpotency 1\n", "K");
}

}  // namespace fixtures
