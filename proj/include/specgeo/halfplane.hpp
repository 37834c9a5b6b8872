#pragma once

// Exact geometry of the upper half-plane: trace-zero matrices, geodesics,
// special points, and the dictionary between them.

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "specgeo/numeric.hpp"

namespace specgeo {

struct Mat2Z {
  BigInt a{1}, b{0}, c{0}, d{1};

  BigInt trace() const { return a + d; }
  BigInt det() const { return a * d - b * c; }
  BigInt content() const;  // gcd of all four entries
  Mat2Z operator-() const { return {-a, -b, -c, -d}; }
  Mat2Z adjugate() const { return {d, -b, -c, a}; }  // inverse when det = 1

  static Mat2Z identity() { return {}; }
  friend Mat2Z operator*(const Mat2Z& x, const Mat2Z& y);
  friend bool operator==(const Mat2Z& x, const Mat2Z& y) = default;
};

std::string to_string(const Mat2Z& m);

// Trace zero, det < 0, gcd(a, b, c) = 1 and c > 0 (or c = 0, a > 0). The
// geodesic of A is the fixed locus of z -> A(conj z).
class GeodesicMatrix {
 public:
  // Validates trace and determinant, then divides out the content and fixes
  // the sign, so that A, -A and kA all give the same GeodesicMatrix.
  static GeodesicMatrix from(const Mat2Z& m);

  const Mat2Z& matrix() const { return m_; }
  const BigInt& a() const { return m_.a; }
  const BigInt& b() const { return m_.b; }
  const BigInt& c() const { return m_.c; }
  BigInt level() const { return -m_.det(); }  // N = |det A|

  friend bool operator==(const GeodesicMatrix&, const GeodesicMatrix&) = default;

 private:
  explicit GeodesicMatrix(Mat2Z m) : m_(std::move(m)) {}
  Mat2Z m_;
};

// A coordinate that is not known exactly. `transcendental` marks values known
// not to be rational or quadratic (for example pi); plain floating input has
// transcendental = false and cannot be used to decide specialness.
struct Inexact {
  Real value;
  bool transcendental = false;
  std::string label;

  static Inexact pi();
  static Inexact floating(const Real& v) { return {v, false, {}}; }
};

using Coord = std::variant<Rational, Inexact>;

Real coord_value(const Coord& c);
bool is_rational(const Coord& c);
std::string to_string(const Coord& c);

struct Vertical {
  Coord x0;
};
// (X - x0)^2 + Y^2 = r, r is the squared radius.
struct Semicircle {
  Coord x0;
  Coord r;
};

class Geodesic {
 public:
  static Geodesic vertical(Coord x0);
  static Geodesic semicircle(Coord x0, Coord r);

  bool is_vertical() const { return std::holds_alternative<Vertical>(shape_); }
  const Vertical& as_vertical() const { return std::get<Vertical>(shape_); }
  const Semicircle& as_semicircle() const { return std::get<Semicircle>(shape_); }
  bool is_exact() const;

  // Numeric centre and squared radius at the current precision (r = 0 for a
  // vertical line).
  Real center() const;
  Real radius_squared() const;

  friend bool operator==(const Geodesic& x, const Geodesic& y);

 private:
  explicit Geodesic(std::variant<Vertical, Semicircle> s) : shape_(std::move(s)) {}
  std::variant<Vertical, Semicircle> shape_;
};

std::string to_string(const Geodesic& g);

struct HPoint {
  Real x;
  Real y;

  static HPoint make(Real x, Real y);
  ComplexHP as_complex() const { return {x, y}; }
};

// x + i sqrt(D) with x, D rational, D > 0.
struct SpecialPoint {
  Rational x;
  Rational D;

  static SpecialPoint make(Rational x, Rational D);
  HPoint numeric() const;
  friend bool operator==(const SpecialPoint&, const SpecialPoint&) = default;
};

// p + q * sqrt(d) with d squarefree; d = 1 and q = 0 for rationals.
struct QuadSurd {
  Rational p;
  Rational q;
  BigInt d{1};

  static QuadSurd rational(Rational v) { return {std::move(v), Rational(0), BigInt(1)}; }
  static QuadSurd make(Rational p, Rational q, const BigInt& radicand);
  bool is_rational() const { return q == 0; }
  QuadSurd conjugate() const { return {p, -q, d}; }
  Real value() const;
  friend bool operator==(const QuadSurd&, const QuadSurd&) = default;
};

struct Infinity {
  friend bool operator==(Infinity, Infinity) { return true; }
};

// A point of P^1(R). Exact data gives QuadSurd or Infinity; inexact data
// gives a numeric Real.
using ProjPoint = std::variant<QuadSurd, Infinity, Real>;

std::string to_string(const ProjPoint& p);

struct RealMat2 {
  Real a, b, c, d;
  static RealMat2 from(const Mat2Z& m);
};

Geodesic geodesic_from_matrix(const GeodesicMatrix& A);
GeodesicMatrix matrix_from_geodesic(const Geodesic& g);

std::pair<ProjPoint, ProjPoint> endpoints(const Geodesic& g);
// Roots of c t^2 - 2 a t - b = 0, (smaller, larger), or (-b/2a, oo) when c = 0.
std::pair<ProjPoint, ProjPoint> endpoints(const GeodesicMatrix& A);

HPoint mobius_act(const RealMat2& m, const HPoint& z);
HPoint mobius_act(const Mat2Z& m, const HPoint& z);

// Integral primitive trace-zero elliptic matrix fixing x + i sqrt(D).
Mat2Z point_fixing_matrix(const SpecialPoint& p);

struct SpecialVerdict {
  enum class Kind { Split, RealQuadratic, NotSpecial };
  Kind kind = Kind::NotSpecial;
  BigInt d{0};  // squarefree part of N for RealQuadratic

  bool special() const { return kind != Kind::NotSpecial; }
};

// Throws PreconditionError on floating (non-transcendental inexact) data.
SpecialVerdict is_special_geodesic(const Geodesic& g);
SpecialVerdict is_special_endpoints(const ProjPoint& e1, const ProjPoint& e2);

std::vector<SpecialPoint> special_points_on_geodesic(const Geodesic& g, std::size_t count);
std::vector<Geodesic> geodesics_through_point(const SpecialPoint& p, std::size_t count);
Geodesic geodesic_through_point(const SpecialPoint& p, const Rational& x0);
// The unique geodesic through two distinct special points.
Geodesic geodesic_through(const SpecialPoint& p1, const SpecialPoint& p2);

// Exact membership test (rational arithmetic, zero residual).
bool contains_exact(const Geodesic& g, const SpecialPoint& p);
bool point_on_geodesic(const Geodesic& g, const HPoint& z, const Real& tol);

}  // namespace specgeo
