#include "specgeo/halfplane.hpp"

#include <algorithm>
#include <sstream>

namespace specgeo {

namespace {

BigInt lcm(const BigInt& x, const BigInt& y) {
  BigInt l;
  mpz_lcm(l.backend().data(), x.backend().data(), y.backend().data());
  return l;
}

BigInt num(const Rational& q) { return BigInt(mp::numerator(q)); }
BigInt den(const Rational& q) { return BigInt(mp::denominator(q)); }

const Rational& rat(const Coord& c) { return std::get<Rational>(c); }

// sqrt(r) = (k/m) sqrt(d) with d squarefree.
QuadSurd sqrt_rational(const Rational& r) {
  require(r > 0, "square root of a non-positive rational");
  BigInt n = num(r), m = den(r);
  BigInt k, d;
  square_decompose(n * m, k, d);
  return QuadSurd::make(Rational(0), Rational(k, m), d);
}

}  // namespace

BigInt Mat2Z::content() const { return gcd(gcd(gcd(a, b), c), d); }

Mat2Z operator*(const Mat2Z& x, const Mat2Z& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
          x.c * y.b + x.d * y.d};
}

std::string to_string(const Mat2Z& m) {
  std::ostringstream os;
  os << "[[" << m.a << "," << m.b << "],[" << m.c << "," << m.d << "]]";
  return os.str();
}

GeodesicMatrix GeodesicMatrix::from(const Mat2Z& m) {
  if (m.trace() != 0) throw PreconditionError("geodesic matrix must have trace zero");
  if (m.det() >= 0) throw PreconditionError("geodesic matrix must be hyperbolic (det < 0)");
  BigInt g = gcd(gcd(m.a, m.b), m.c);
  Mat2Z r{m.a / g, m.b / g, m.c / g, m.d / g};
  if (r.c < 0 || (r.c == 0 && r.a < 0)) r = -r;
  return GeodesicMatrix(r);
}

Inexact Inexact::pi() { return {real_pi(), true, "pi"}; }

Real coord_value(const Coord& c) {
  if (auto q = std::get_if<Rational>(&c)) return to_real(*q);
  return std::get<Inexact>(c).value;
}

bool is_rational(const Coord& c) { return std::holds_alternative<Rational>(c); }

std::string to_string(const Coord& c) {
  if (auto q = std::get_if<Rational>(&c)) return q->str();
  const auto& e = std::get<Inexact>(c);
  if (!e.label.empty()) return e.label;
  return format_real(e.value, 20);
}

Geodesic Geodesic::vertical(Coord x0) { return Geodesic(Vertical{std::move(x0)}); }

Geodesic Geodesic::semicircle(Coord x0, Coord r) {
  if (coord_value(r) <= 0) throw PreconditionError("semicircle needs r > 0");
  return Geodesic(Semicircle{std::move(x0), std::move(r)});
}

bool Geodesic::is_exact() const {
  if (is_vertical()) return is_rational(as_vertical().x0);
  return is_rational(as_semicircle().x0) && is_rational(as_semicircle().r);
}

Real Geodesic::center() const {
  return is_vertical() ? coord_value(as_vertical().x0) : coord_value(as_semicircle().x0);
}

Real Geodesic::radius_squared() const {
  return is_vertical() ? Real(0) : coord_value(as_semicircle().r);
}

namespace {
bool coord_equal(const Coord& x, const Coord& y) {
  if (x.index() != y.index()) return false;
  if (auto q = std::get_if<Rational>(&x)) return *q == std::get<Rational>(y);
  const auto& a = std::get<Inexact>(x);
  const auto& b = std::get<Inexact>(y);
  return a.value == b.value && a.transcendental == b.transcendental;
}
}  // namespace

bool operator==(const Geodesic& x, const Geodesic& y) {
  if (x.is_vertical() != y.is_vertical()) return false;
  if (x.is_vertical()) return coord_equal(x.as_vertical().x0, y.as_vertical().x0);
  return coord_equal(x.as_semicircle().x0, y.as_semicircle().x0) &&
         coord_equal(x.as_semicircle().r, y.as_semicircle().r);
}

std::string to_string(const Geodesic& g) {
  if (g.is_vertical()) return "Vertical{" + to_string(g.as_vertical().x0) + "}";
  return "Semicircle{" + to_string(g.as_semicircle().x0) + ", " + to_string(g.as_semicircle().r) +
         "}";
}

HPoint HPoint::make(Real x, Real y) {
  if (!(y > 0)) throw PreconditionError("point must lie in the upper half-plane (y > 0)");
  return {std::move(x), std::move(y)};
}

SpecialPoint SpecialPoint::make(Rational x, Rational D) {
  if (D <= 0) throw PreconditionError("special point needs D > 0");
  return {std::move(x), std::move(D)};
}

HPoint SpecialPoint::numeric() const {
  using std::sqrt;
  return {to_real(x), sqrt(to_real(D))};
}

QuadSurd QuadSurd::make(Rational p, Rational q, const BigInt& radicand) {
  require(radicand > 0, "quadratic surd radicand must be positive");
  BigInt k, d;
  square_decompose(radicand, k, d);
  q *= Rational(k);
  if (d == 1 || q == 0) return {p + (d == 1 ? q : Rational(0)), Rational(0), BigInt(1)};
  return {std::move(p), std::move(q), d};
}

Real QuadSurd::value() const {
  using std::sqrt;
  return to_real(p) + to_real(q) * sqrt(to_real(d));
}

std::string to_string(const ProjPoint& p) {
  if (std::holds_alternative<Infinity>(p)) return "oo";
  if (auto r = std::get_if<Real>(&p)) return format_real(*r, 20);
  const auto& s = std::get<QuadSurd>(p);
  if (s.is_rational()) return s.p.str();
  std::ostringstream os;
  os << s.p.str() << (s.q < 0 ? " - " : " + ") << Rational(mp::abs(s.q)).str() << "*sqrt(" << s.d
     << ")";
  return os.str();
}

RealMat2 RealMat2::from(const Mat2Z& m) {
  return {to_real(m.a), to_real(m.b), to_real(m.c), to_real(m.d)};
}

Geodesic geodesic_from_matrix(const GeodesicMatrix& A) {
  const BigInt &a = A.a(), &b = A.b(), &c = A.c();
  if (c == 0) return Geodesic::vertical(Rational(-b, 2 * a));
  return Geodesic::semicircle(Rational(a, c), Rational(a * a + b * c, c * c));
}

GeodesicMatrix matrix_from_geodesic(const Geodesic& g) {
  if (!g.is_exact()) throw PreconditionError("matrix_from_geodesic needs rational data");
  if (g.is_vertical()) {
    const Rational& x0 = rat(g.as_vertical().x0);
    // a = 1, b = -2 x0, c = 0, cleared of denominators.
    return GeodesicMatrix::from({den(x0), -2 * num(x0), BigInt(0), -den(x0)});
  }
  const Rational& x0 = rat(g.as_semicircle().x0);
  const Rational& r = rat(g.as_semicircle().r);
  Rational shift = r - x0 * x0;  // b / c
  BigInt c = lcm(den(x0), den(shift));
  Rational a = x0 * Rational(c);
  Rational b = shift * Rational(c);
  return GeodesicMatrix::from({num(a), num(b), c, -num(a)});
}

std::pair<ProjPoint, ProjPoint> endpoints(const Geodesic& g) {
  if (!g.is_exact()) {
    using std::sqrt;
    if (g.is_vertical()) return {ProjPoint(g.center()), ProjPoint(Infinity{})};
    Real s = sqrt(g.radius_squared());
    return {ProjPoint(Real(g.center() - s)), ProjPoint(Real(g.center() + s))};
  }
  if (g.is_vertical()) {
    return {ProjPoint(QuadSurd::rational(rat(g.as_vertical().x0))), ProjPoint(Infinity{})};
  }
  const Rational& x0 = rat(g.as_semicircle().x0);
  QuadSurd s = sqrt_rational(rat(g.as_semicircle().r));
  QuadSurd lo{x0 - s.p - (s.d == 1 ? s.q : Rational(0)), s.d == 1 ? Rational(0) : -s.q, s.d};
  QuadSurd hi{x0 + s.p + (s.d == 1 ? s.q : Rational(0)), s.d == 1 ? Rational(0) : s.q, s.d};
  return {ProjPoint(lo), ProjPoint(hi)};
}

std::pair<ProjPoint, ProjPoint> endpoints(const GeodesicMatrix& A) {
  return endpoints(geodesic_from_matrix(A));
}

HPoint mobius_act(const RealMat2& m, const HPoint& z) {
  if (!(m.a * m.d - m.b * m.c > 0)) throw PreconditionError("mobius_act needs det > 0");
  ComplexHP w = z.as_complex();
  ComplexHP r = (w * m.a + ComplexHP(m.b)) / (w * m.c + ComplexHP(m.d));
  return {r.re, r.im};
}

HPoint mobius_act(const Mat2Z& m, const HPoint& z) { return mobius_act(RealMat2::from(m), z); }

Mat2Z point_fixing_matrix(const SpecialPoint& p) {
  // [[x, -(x^2 + D)], [1, -x]] cleared of denominators.
  Rational top = -(p.x * p.x + p.D);
  BigInt s = lcm(den(p.x), den(top));
  Rational a = p.x * Rational(s), b = top * Rational(s);
  Mat2Z m{num(a), num(b), s, -num(a)};
  BigInt g = m.content();
  return {m.a / g, m.b / g, m.c / g, m.d / g};
}

namespace {
SpecialVerdict classify_level(const BigInt& N) {
  SpecialVerdict v;
  if (is_perfect_square(N)) {
    v.kind = SpecialVerdict::Kind::Split;
    v.d = 1;
  } else {
    BigInt k;
    square_decompose(N, k, v.d);
    v.kind = SpecialVerdict::Kind::RealQuadratic;
  }
  return v;
}

void reject_floating(const Coord& c) {
  if (auto e = std::get_if<Inexact>(&c); e && !e->transcendental)
    throw PreconditionError("specialness cannot be decided from floating-point data");
}
}  // namespace

SpecialVerdict is_special_geodesic(const Geodesic& g) {
  if (g.is_vertical()) {
    reject_floating(g.as_vertical().x0);
  } else {
    reject_floating(g.as_semicircle().x0);
    reject_floating(g.as_semicircle().r);
  }
  if (!g.is_exact()) return {};
  return classify_level(matrix_from_geodesic(g).level());
}

SpecialVerdict is_special_endpoints(const ProjPoint& e1, const ProjPoint& e2) {
  if (std::holds_alternative<Real>(e1) || std::holds_alternative<Real>(e2))
    throw PreconditionError("specialness cannot be decided from floating-point endpoints");
  bool inf1 = std::holds_alternative<Infinity>(e1), inf2 = std::holds_alternative<Infinity>(e2);
  if (inf1 && inf2) throw PreconditionError("a geodesic needs two distinct endpoints");
  if (inf1 || inf2) {
    const QuadSurd& s = std::get<QuadSurd>(inf1 ? e2 : e1);
    if (!s.is_rational()) return {};
    return is_special_geodesic(Geodesic::vertical(s.p));
  }
  const QuadSurd& s1 = std::get<QuadSurd>(e1);
  const QuadSurd& s2 = std::get<QuadSurd>(e2);
  if (s1 == s2) throw PreconditionError("a geodesic needs two distinct endpoints");
  if (s1.is_rational() != s2.is_rational()) return {};
  if (!s1.is_rational() && !(s2 == s1.conjugate())) return {};
  // Rational centre and squared radius: x0 = (e1 + e2)/2, r = ((e2 - e1)/2)^2.
  Rational x0 = (s1.p + s2.p) / 2;
  Rational half = (s2.p - s1.p) / 2;
  Rational r = s1.is_rational() ? half * half : s1.q * s1.q * Rational(s1.d);
  return is_special_geodesic(Geodesic::semicircle(x0, r));
}

std::vector<SpecialPoint> special_points_on_geodesic(const Geodesic& g, std::size_t count) {
  require(count >= 1, "count must be positive");
  if (!is_special_geodesic(g).special())
    throw PreconditionError("special_points_on_geodesic needs a special geodesic");
  std::vector<SpecialPoint> out;
  if (g.is_vertical()) {
    const Rational& x0 = rat(g.as_vertical().x0);
    for (std::size_t D = 1; out.size() < count; ++D) out.push_back({x0, Rational(D)});
    return out;
  }
  const Rational& x0 = rat(g.as_semicircle().x0);
  const Rational& r = rat(g.as_semicircle().r);
  const BigInt rn = num(r), rd = den(r);
  for (BigInt m = 1; out.size() < count; ++m) {
    // Largest k with (k/m)^2 < r, i.e. k^2 rd < m^2 rn.
    BigInt k = isqrt(m * m * rn / rd);
    while (k > 0 && k * k * rd >= m * m * rn) --k;
    while ((k + 1) * (k + 1) * rd < m * m * rn) ++k;
    for (; k >= 0 && out.size() < count; --k) {
      if (k == 0 && m != 1) break;
      if (k != 0 && gcd(k, m) != 1) continue;
      Rational off(k, m);
      Rational D = r - off * off;
      out.push_back({x0 + off, D});
      if (k != 0 && out.size() < count) out.push_back({x0 - off, D});
    }
  }
  return out;
}

Geodesic geodesic_through_point(const SpecialPoint& p, const Rational& x0) {
  Rational dx = p.x - x0;
  return Geodesic::semicircle(x0, dx * dx + p.D);
}

std::vector<Geodesic> geodesics_through_point(const SpecialPoint& p, std::size_t count) {
  require(count >= 1, "count must be positive");
  std::vector<Geodesic> out;
  // Integer centres in the order 0, 1, -1, 2, -2, ..., skipping x0 = x.
  for (long long step = 0; out.size() < count; ++step) {
    long long k = (step % 2 == 1) ? (step + 1) / 2 : -(step / 2);
    Rational x0(k);
    if (x0 == p.x) continue;
    out.push_back(geodesic_through_point(p, x0));
  }
  return out;
}

Geodesic geodesic_through(const SpecialPoint& p1, const SpecialPoint& p2) {
  if (p1 == p2) throw PreconditionError("geodesic_through needs two distinct points");
  if (p1.x == p2.x) return Geodesic::vertical(p1.x);
  Rational x0 = (p1.x * p1.x - p2.x * p2.x + p1.D - p2.D) / (2 * (p1.x - p2.x));
  return geodesic_through_point(p1, x0);
}

bool contains_exact(const Geodesic& g, const SpecialPoint& p) {
  if (!g.is_exact()) throw PreconditionError("contains_exact needs rational data");
  if (g.is_vertical()) return p.x == rat(g.as_vertical().x0);
  Rational dx = p.x - rat(g.as_semicircle().x0);
  return dx * dx + p.D == rat(g.as_semicircle().r);
}

bool point_on_geodesic(const Geodesic& g, const HPoint& z, const Real& tol) {
  require(tol > 0, "tol must be positive");
  using std::abs;
  Real x0 = g.center();
  if (g.is_vertical()) return abs(z.x - x0) <= tol;
  Real r = g.radius_squared();
  Real dx = z.x - x0;
  return abs(dx * dx + z.y * z.y - r) <= tol * (1 + r);
}

}  // namespace specgeo
