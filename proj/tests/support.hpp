#pragma once

#include <random>

#include "doctest.h"
#include "specgeo/algcheck.hpp"

namespace sg = specgeo;

inline sg::PrecisionCtx ctx256() { return sg::PrecisionCtx::with_bits(256); }

inline sg::Rational Q(long p, long q = 1) { return sg::Rational(sg::BigInt(p), sg::BigInt(q)); }

inline sg::Mat2Z M(long a, long b, long c, long d) { return {a, b, c, d}; }

// Random SL2(Z) element as a product of T^k and S.
inline sg::Mat2Z random_sl2(std::mt19937_64& rng, int letters, int kmax) {
  std::uniform_int_distribution<int> k(-kmax, kmax);
  sg::Mat2Z m = sg::Mat2Z::identity();
  for (int i = 0; i < letters; ++i) {
    m = m * sg::Mat2Z{1, k(rng), 0, 1};
    m = m * sg::Mat2Z{0, -1, 1, 0};
  }
  return m;
}

inline double dbl(const sg::Real& v) { return static_cast<double>(v); }
