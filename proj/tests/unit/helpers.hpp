#pragma once

#include <doctest.h>

#include <functional>
#include <random>

#include "glift/error.hpp"
#include "glift/types.hpp"

namespace testing {

inline glift::Vector v1(double a) { return glift::Vector::Constant(1, a); }
inline glift::Vector v2(double a, double b) { return (glift::Vector(2) << a, b).finished(); }

inline glift::Matrix random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  glift::Matrix a(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) a(i, j) = u(rng);
  return a;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Kind of the glift::Error thrown by fn; fails the test when nothing is thrown.
inline glift::ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const glift::Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return glift::ErrorKind::InvalidArgument;
}

}  // namespace testing
