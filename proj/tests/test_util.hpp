#pragma once

#include <random>

#include "ctm/clifford.hpp"

namespace ctm::testutil {

inline Multivector random_mv(int m, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Multivector x(m);
  for (int i = 0; i < x.dim(); ++i) x[BladeMask(i)] = u(rng);
  return x;
}

inline bool approx_eq(const Multivector& a, const Multivector& b, double tol) {
  return norm(a - b) <= tol;
}

}  // namespace ctm::testutil
