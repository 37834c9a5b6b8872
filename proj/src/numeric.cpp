#include "specgeo/numeric.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace specgeo {

unsigned bits_to_digits10(unsigned bits) {
  return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

ScopedPrecision::ScopedPrecision(unsigned bits)
    : saved_digits_(Real::default_precision()) {
  Real::default_precision(bits_to_digits10(bits));
}

ScopedPrecision::~ScopedPrecision() { Real::default_precision(saved_digits_); }

unsigned current_precision_bits() {
  return static_cast<unsigned>(std::floor(Real::default_precision() / 0.30102999566398120));
}

Real real_pi() {
  Real x;
  mpfr_const_pi(x.backend().data(), MPFR_RNDN);
  return x;
}

Real to_real(const BigInt& v) {
  Real x;
  mpfr_set_z(x.backend().data(), v.backend().data(), MPFR_RNDN);
  return x;
}

Real to_real(const Rational& v) {
  Real x;
  mpfr_set_q(x.backend().data(), v.backend().data(), MPFR_RNDN);
  return x;
}

Real parse_real(const std::string& text) {
  try {
    return Real(text);
  } catch (const std::exception&) {
    throw PreconditionError("not a real number: " + text);
  }
}

BigInt isqrt(const BigInt& n) {
  require(n >= 0, "isqrt of a negative number");
  BigInt r;
  mpz_sqrt(r.backend().data(), n.backend().data());
  return r;
}

bool is_perfect_square(const BigInt& n) {
  if (n < 0) return false;
  return mpz_perfect_square_p(n.backend().data()) != 0;
}

void square_decompose(const BigInt& n, BigInt& k, BigInt& d) {
  require(n > 0, "square_decompose needs a positive integer");
  k = 1;
  d = 1;
  BigInt m = n;
  for (BigInt p = 2; p * p <= m; ++p) {
    while (m % (p * p) == 0) {
      m /= p * p;
      k *= p;
    }
    if (m % p == 0) {
      m /= p;
      d *= p;
    }
  }
  d *= m;
}

BigInt gcd(const BigInt& a, const BigInt& b) {
  BigInt g;
  mpz_gcd(g.backend().data(), a.backend().data(), b.backend().data());
  return g;
}

std::string format_real(const Real& v, int digits) {
  if (v == 0) return "0";
  return v.str(digits, std::ios_base::scientific);
}

std::string format_double(double v, int digits) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

}  // namespace specgeo
