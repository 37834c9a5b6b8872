#pragma once

// q-expansions shared by the double-precision seed search and the
// high-precision evaluators. Internal to the library.

#include <cmath>
#include <cstdint>
#include <vector>

#include "specgeo/numeric.hpp"

namespace specgeo::detail {

// sigma_3(n), sigma_5(n) for n < limit.
const std::vector<std::int64_t>& sigma3_table();
const std::vector<std::int64_t>& sigma5_table();
inline constexpr unsigned kSigmaLimit = 2048;

inline double log_scalar(double v) { return std::log(v); }
inline double to_double_scalar(double v) { return v; }
inline double to_double_scalar(const Real& v) { return static_cast<double>(v); }

template <class T>
struct QSeries {
  Complex<T> q;
  Complex<T> e4, e6;
  Complex<T> p;       // prod_{n >= 1} (1 - q^n)
  T e4_tail, e6_tail;  // absolute tails of 240 sum and 504 sum
  T p_tail;            // relative tail of the product
  unsigned terms = 0;
};

// Smallest truncation whose sigma_5-weighted tail drops below e^log_eps.
inline unsigned q_terms_needed(double log_qabs, double log_eps, unsigned cap) {
  const double c = std::log(504.0 * 1.05);
  unsigned t = 1;
  while (t < cap && c + 5.0 * std::log(t + 1.0) + (t + 1.0) * log_qabs >= log_eps) ++t;
  return t;
}

template <class T>
QSeries<T> q_series(const Complex<T>& z, unsigned cap, double log_eps) {
  using std::cos;
  using std::exp;
  using std::sin;
  const T two_pi = 2 * pi_value<T>();
  QSeries<T> s;
  T mag = exp(-two_pi * z.im);
  s.q = Complex<T>(mag * cos(two_pi * z.re), mag * sin(two_pi * z.re));
  const double log_qabs = -2.0 * 3.14159265358979323846 * to_double_scalar(z.im);
  if (cap >= kSigmaLimit) cap = kSigmaLimit - 1;
  s.terms = q_terms_needed(log_qabs, log_eps, cap);

  const auto& s3 = sigma3_table();
  const auto& s5 = sigma5_table();
  Complex<T> qn = s.q, a4(T(0)), a6(T(0));
  Complex<T> prod(T(1));
  for (unsigned n = 1; n <= s.terms; ++n) {
    a4 += qn * T(static_cast<double>(s3[n]));
    a6 += qn * T(static_cast<double>(s5[n]));
    prod -= prod * qn;
    qn *= s.q;
  }
  s.e4 = Complex<T>(T(1)) + a4 * T(240);
  s.e6 = Complex<T>(T(1)) - a6 * T(504);
  s.p = prod;

  // sigma_k(n) <= 1.21 n^k; geometric tail with ratio ((m+1)/m)^k |q|.
  const double m = s.terms + 1.0;
  const double qa = std::exp(log_qabs);
  const double r5 = std::pow((m + 1) / m, 5) * qa, r3 = std::pow((m + 1) / m, 3) * qa;
  T lead = exp(T(m * log_qabs));
  s.e4_tail = T(240 * 1.21 * std::pow(m, 3) / (1 - r3)) * lead;
  s.e6_tail = T(504 * 1.05 * std::pow(m, 5) / (1 - r5)) * lead;
  s.p_tail = T(2.0 / (1 - qa)) * lead;
  return s;
}

template <class T>
struct EtaPowers {
  Complex<T> p8, p12, p24;
};

template <class T>
EtaPowers<T> eta_powers(const Complex<T>& p) {
  Complex<T> p2 = p * p, p4 = p2 * p2;
  EtaPowers<T> e;
  e.p8 = p4 * p4;
  e.p12 = e.p8 * p4;
  e.p24 = e.p12 * e.p12;
  return e;
}

// f and df/dz for one of the three functions used by the inversion:
// j, gamma_2 = E4 / eta^8 (a cube root of j), gamma_3 = E6 / eta^12 (a square
// root of j - 1728).
enum class Gauge { J, Gamma2, Gamma3 };

template <class T>
void gauge_eval(Gauge g, const Complex<T>& z, unsigned cap, double log_eps, Complex<T>& f,
                Complex<T>& df) {
  QSeries<T> s = q_series(z, cap, log_eps);
  EtaPowers<T> e = eta_powers(s.p);
  const T pi = pi_value<T>();
  const Complex<T> i_unit(T(0), T(1));
  switch (g) {
    case Gauge::J: {
      Complex<T> delta = s.q * e.p24;
      Complex<T> e4sq = s.e4 * s.e4;
      f = e4sq * s.e4 / delta;
      df = i_unit * (-2 * pi) * e4sq * s.e6 / delta;
      break;
    }
    case Gauge::Gamma2: {
      Complex<T> e8 = cexp(Complex<T>(T(0), 2 * pi / 3) * z) * e.p8;
      f = s.e4 / e8;
      df = i_unit * (-2 * pi / 3) * s.e6 / e8;
      break;
    }
    case Gauge::Gamma3: {
      Complex<T> e12 = cexp(Complex<T>(T(0), pi) * z) * e.p12;
      f = s.e6 / e12;
      df = i_unit * (-pi) * s.e4 * s.e4 / e12;
      break;
    }
  }
}

}  // namespace specgeo::detail
