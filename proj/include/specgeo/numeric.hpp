#pragma once

// Scalar types shared by every module: exact integers and rationals backed by
// GMP, a runtime-precision binary float backed by MPFR, and a small complex
// template usable with both `double` and `Real`.

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace specgeo {

namespace mp = boost::multiprecision;

using BigInt = mp::number<mp::gmp_int, mp::et_off>;
using Rational = mp::number<mp::gmp_rational, mp::et_off>;
using Real = mp::number<mp::mpfr_float_backend<0>, mp::et_off>;

// Error categories. Precondition violations are caller bugs or bad input;
// precision and convergence failures are recoverable by raising precision.
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct PrecisionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const char* what) {
  if (!cond) throw PreconditionError(what);
}

unsigned bits_to_digits10(unsigned bits);

// Sets the working precision for newly created `Real` values and restores the
// previous value on destruction.
class ScopedPrecision {
 public:
  explicit ScopedPrecision(unsigned bits);
  ~ScopedPrecision();
  ScopedPrecision(const ScopedPrecision&) = delete;
  ScopedPrecision& operator=(const ScopedPrecision&) = delete;

 private:
  unsigned saved_digits_;
};

unsigned current_precision_bits();

Real real_pi();
Real to_real(const BigInt& v);
Real to_real(const Rational& v);
Real parse_real(const std::string& text);

BigInt isqrt(const BigInt& n);
bool is_perfect_square(const BigInt& n);
// Largest k with k^2 | n, and the squarefree cofactor: n = k^2 * d.
void square_decompose(const BigInt& n, BigInt& k, BigInt& d);
BigInt gcd(const BigInt& a, const BigInt& b);

// Decimal rendering with a fixed number of significant digits (deterministic).
std::string format_real(const Real& v, int digits = 30);
std::string format_double(double v, int digits = 17);

template <class T>
T pi_value();
template <>
inline double pi_value<double>() {
  return 3.141592653589793238462643383279502884;
}
template <>
inline Real pi_value<Real>() {
  return real_pi();
}

template <class T>
struct Complex {
  T re{};
  T im{};

  Complex() = default;
  Complex(T r) : re(std::move(r)), im(0) {}  // NOLINT: implicit real lift
  Complex(T r, T i) : re(std::move(r)), im(std::move(i)) {}

  Complex& operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Complex& operator-=(const Complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Complex& operator*=(const Complex& o) {
    T r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  Complex& operator*=(const T& s) {
    re *= s;
    im *= s;
    return *this;
  }
  Complex& operator/=(const Complex& o) {
    T den = o.re * o.re + o.im * o.im;
    T r = (re * o.re + im * o.im) / den;
    im = (im * o.re - re * o.im) / den;
    re = std::move(r);
    return *this;
  }
  Complex& operator/=(const T& s) {
    re /= s;
    im /= s;
    return *this;
  }

  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
  friend Complex operator*(Complex a, const T& s) { return a *= s; }
  friend Complex operator*(const T& s, Complex a) { return a *= s; }
  friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
  friend Complex operator/(Complex a, const T& s) { return a /= s; }
  friend Complex operator-(const Complex& a) { return {-a.re, -a.im}; }

  Complex conj() const { return {re, -im}; }
  T norm() const { return re * re + im * im; }
  T abs() const {
    using std::hypot;
    return hypot(re, im);
  }
  T arg() const {
    using std::atan2;
    return atan2(im, re);
  }
};

template <class T>
Complex<T> cexp(const Complex<T>& z) {
  using std::cos;
  using std::exp;
  using std::sin;
  T m = exp(z.re);
  return {m * cos(z.im), m * sin(z.im)};
}

template <class T>
Complex<T> clog(const Complex<T>& z) {
  using std::log;
  return {log(z.abs()), z.arg()};
}

// Principal square root.
template <class T>
Complex<T> csqrt(const Complex<T>& z) {
  using std::sqrt;
  T m = z.abs();
  if (m == 0) return {T(0), T(0)};
  T re = sqrt((m + z.re) / 2);
  T im = sqrt((m - z.re) / 2);
  if (z.im < 0) im = -im;
  return {re, im};
}

template <class T>
Complex<T> cpow(Complex<T> base, unsigned e) {
  Complex<T> acc{T(1), T(0)};
  while (e) {
    if (e & 1u) acc *= base;
    e >>= 1u;
    if (e) base *= base;
  }
  return acc;
}

using ComplexHP = Complex<Real>;

inline Complex<double> to_double(const ComplexHP& z) {
  return {static_cast<double>(z.re), static_cast<double>(z.im)};
}
inline ComplexHP to_hp(const Complex<double>& z) {
  return {Real(z.re), Real(z.im)};
}

}  // namespace specgeo
