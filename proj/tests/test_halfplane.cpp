#include "support.hpp"

using namespace specgeo;

namespace {

Geodesic geo(const Mat2Z& m) { return geodesic_from_matrix(GeodesicMatrix::from(m)); }

// (p + q sqrt d)^2 split into rational and surd parts.
std::pair<Rational, Rational> square(const QuadSurd& s) {
  Rational d(s.d);
  return {s.p * s.p + s.q * s.q * d, 2 * s.p * s.q};
}

}  // namespace

TEST_CASE("geodesic_from_matrix on the worked examples") {
  CHECK(geo(M(-1, 0, 0, 1)) == Geodesic::vertical(Q(0)));
  CHECK(geo(M(1, 1, 1, -1)) == Geodesic::semicircle(Q(1), Q(2)));
  CHECK(geo(M(0, 5, 1, 0)) == Geodesic::semicircle(Q(0), Q(5)));
}

TEST_CASE("geodesic_from_matrix rejects non-hyperbolic or traced input") {
  CHECK_THROWS_AS(GeodesicMatrix::from(M(0, -1, 1, 0)), PreconditionError);
  CHECK_THROWS_AS(GeodesicMatrix::from(M(1, 1, 1, 1)), PreconditionError);
}

TEST_CASE("matrix_from_geodesic examples") {
  CHECK(matrix_from_geodesic(Geodesic::vertical(Q(0))).matrix() == M(1, 0, 0, -1));
  CHECK(matrix_from_geodesic(Geodesic::semicircle(Q(1), Q(2))).matrix() == M(1, 1, 1, -1));
  CHECK(matrix_from_geodesic(Geodesic::semicircle(Q(0), Q(5, 2))).matrix() == M(0, 5, 2, 0));
  CHECK_THROWS_AS(matrix_from_geodesic(Geodesic::semicircle(Inexact::pi(), Q(1))), PreconditionError);
}

TEST_CASE("round trip through the matrix dictionary is exact") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> num(-40, 40), den(1, 12), pos(1, 60);
  for (int k = 0; k < 200; ++k) {
    Geodesic g = (k % 5 == 0) ? Geodesic::vertical(Q(num(rng), den(rng)))
                              : Geodesic::semicircle(Q(num(rng), den(rng)), Q(pos(rng), den(rng)));
    CHECK(geodesic_from_matrix(matrix_from_geodesic(g)) == g);
  }
}

TEST_CASE("A, -A and kA give the same geodesic") {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<long> e(-30, 30), k(2, 9);
  int done = 0;
  while (done < 100) {
    long a = e(rng), b = e(rng), c = e(rng);
    Mat2Z A = M(a, b, c, -a);
    if (A.det() >= 0) continue;
    long s = k(rng);
    Geodesic g = geo(A);
    CHECK(geo(-A) == g);
    CHECK(geo(M(s * a, s * b, s * c, -s * a)) == g);
    ++done;
  }
}

TEST_CASE("endpoints") {
  auto v = endpoints(Geodesic::vertical(Q(0)));
  CHECK(std::get<QuadSurd>(v.first) == QuadSurd::rational(Q(0)));
  CHECK(std::holds_alternative<Infinity>(v.second));

  auto s = endpoints(Geodesic::semicircle(Q(1), Q(2)));
  CHECK(std::get<QuadSurd>(s.first) == QuadSurd::make(Q(1), Q(-1), BigInt(2)));
  CHECK(std::get<QuadSurd>(s.second) == QuadSurd::make(Q(1), Q(1), BigInt(2)));

  auto f = endpoints(Geodesic::semicircle(Q(0), Q(5)));
  CHECK(std::get<QuadSurd>(f.first) == QuadSurd::make(Q(0), Q(-1), BigInt(5)));
}

TEST_CASE("endpoints are the exact roots of c t^2 - 2 a t - b") {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<long> e(-25, 25);
  int done = 0;
  while (done < 120) {
    long a = e(rng), b = e(rng), c = e(rng);
    Mat2Z A = M(a, b, c, -a);
    if (A.det() >= 0 || c == 0) continue;
    GeodesicMatrix G = GeodesicMatrix::from(A);
    for (const auto& pt : {endpoints(geodesic_from_matrix(G)).first, endpoints(geodesic_from_matrix(G)).second}) {
      const auto& t = std::get<QuadSurd>(pt);
      auto [r2, s2] = square(t);
      Rational ca(G.c()), aa(G.a()), ba(G.b());
      CHECK(ca * r2 - 2 * aa * t.p - ba == 0);
      CHECK(ca * s2 - 2 * aa * t.q == 0);
    }
    ++done;
  }
}

TEST_CASE("mobius_act") {
  ScopedPrecision sp(256);
  HPoint i = HPoint::make(Real(0), Real(1));
  HPoint z = HPoint::make(Real("0.3"), Real("0.7"));
  HPoint w = mobius_act(Mat2Z::identity(), z);
  CHECK(w.x == z.x);
  CHECK(w.y == z.y);
  HPoint s = mobius_act(M(0, -1, 1, 0), i);
  CHECK(dbl(abs(s.x)) < 1e-70);
  CHECK(dbl(abs(s.y - 1)) < 1e-70);
  HPoint t = mobius_act(M(1, 1, 0, 1), i);
  CHECK(dbl(abs(t.x - 1)) < 1e-70);
  CHECK(dbl(abs(t.y - 1)) < 1e-70);
}

TEST_CASE("point_fixing_matrix") {
  ScopedPrecision sp(256);
  CHECK(point_fixing_matrix(SpecialPoint::make(Q(0), Q(1))) == M(0, -1, 1, 0));
  CHECK(point_fixing_matrix(SpecialPoint::make(Q(0), Q(2))) == M(0, -2, 1, 0));
  for (auto p : {SpecialPoint::make(Q(2), Q(1)), SpecialPoint::make(Q(1, 3), Q(5, 7)),
                 SpecialPoint::make(Q(-3, 2), Q(1, 4))}) {
    Mat2Z A = point_fixing_matrix(p);
    CHECK(A.trace() == 0);
    CHECK(A.det() > 0);
    CHECK(A.content() == 1);
    HPoint z = p.numeric(), w = mobius_act(A, z);
    CHECK(dbl(abs(w.x - z.x) + abs(w.y - z.y)) < 1e-60);
  }
}

TEST_CASE("is_special_geodesic") {
  auto v = is_special_geodesic(Geodesic::vertical(Q(0)));
  CHECK(v.kind == SpecialVerdict::Kind::Split);
  auto s = is_special_geodesic(Geodesic::semicircle(Q(1), Q(2)));
  CHECK(s.kind == SpecialVerdict::Kind::RealQuadratic);
  CHECK(s.d == 2);
  CHECK(is_special_geodesic(Geodesic::semicircle(Inexact::pi(), Q(1))).kind ==
        SpecialVerdict::Kind::NotSpecial);
  CHECK_THROWS_AS(is_special_geodesic(Geodesic::semicircle(Inexact::floating(Real("0.1")), Q(1))),
                  PreconditionError);
  // Semicircle{0, 1/4} has N = 4 * 1 ... a square level, split.
  CHECK(is_special_geodesic(Geodesic::semicircle(Q(0), Q(1, 4))).kind == SpecialVerdict::Kind::Split);
  CHECK(is_special_geodesic(Geodesic::semicircle(Q(0), Q(12))).d == 3);
}

TEST_CASE("special points on a geodesic lie on it exactly") {
  Geodesic g5 = Geodesic::semicircle(Q(0), Q(5));
  auto pts = special_points_on_geodesic(g5, 1);
  REQUIRE(pts.size() == 1);
  CHECK(pts[0] == SpecialPoint::make(Q(2), Q(1)));

  auto g10 = special_points_on_geodesic(Geodesic::semicircle(Q(0), Q(10)), 1);
  CHECK(g10[0] == SpecialPoint::make(Q(3), Q(1)));

  auto vp = special_points_on_geodesic(Geodesic::vertical(Q(0)), 3);
  REQUIRE(vp.size() == 3);
  CHECK(vp[0] == SpecialPoint::make(Q(0), Q(1)));
  CHECK(vp[1] == SpecialPoint::make(Q(0), Q(2)));
  CHECK(vp[2] == SpecialPoint::make(Q(0), Q(3)));

  for (const Geodesic& g : {g5, Geodesic::semicircle(Q(1, 3), Q(7, 5)), Geodesic::vertical(Q(-2, 3))}) {
    auto many = special_points_on_geodesic(g, 60);
    CHECK(many.size() == 60);
    for (std::size_t i = 0; i < many.size(); ++i) {
      CHECK(contains_exact(g, many[i]));
      for (std::size_t j = 0; j < i; ++j) CHECK_FALSE(many[i] == many[j]);
    }
  }
  CHECK_THROWS_AS(special_points_on_geodesic(Geodesic::semicircle(Inexact::pi(), Q(1)), 3),
                  PreconditionError);
}

TEST_CASE("geodesics through a special point") {
  auto gi = geodesics_through_point(SpecialPoint::make(Q(0), Q(1)), 2);
  REQUIRE(gi.size() == 2);
  CHECK(gi[0] == Geodesic::semicircle(Q(1), Q(2)));
  CHECK(gi[1] == Geodesic::semicircle(Q(-1), Q(2)));
  CHECK(geodesics_through_point(SpecialPoint::make(Q(2), Q(1)), 1)[0] == Geodesic::semicircle(Q(0), Q(5)));
  CHECK(geodesic_through_point(SpecialPoint::make(Q(0), Q(1)), Q(0)) == Geodesic::semicircle(Q(0), Q(1)));

  SpecialPoint p = SpecialPoint::make(Q(3, 4), Q(2, 9));
  for (const auto& g : geodesics_through_point(p, 25)) {
    CHECK(contains_exact(g, p));
    CHECK(is_special_geodesic(g).special());
  }
}

TEST_CASE("the geodesic through two special points is special") {
  std::mt19937_64 rng(14);
  std::uniform_int_distribution<long> num(-20, 20), den(1, 9), pos(1, 30);
  for (int k = 0; k < 100; ++k) {
    SpecialPoint a = SpecialPoint::make(Q(num(rng), den(rng)), Q(pos(rng), den(rng)));
    SpecialPoint b = SpecialPoint::make(Q(num(rng), den(rng)), Q(pos(rng), den(rng)));
    if (a == b) continue;
    Geodesic g = geodesic_through(a, b);
    CHECK(contains_exact(g, a));
    CHECK(contains_exact(g, b));
    CHECK(is_special_geodesic(g).special());
  }
}

TEST_CASE("point_on_geodesic") {
  ScopedPrecision sp(256);
  Geodesic g5 = Geodesic::semicircle(Q(0), Q(5));
  CHECK(point_on_geodesic(g5, HPoint::make(Real(2), Real(1)), Real(1e-12)));
  CHECK(point_on_geodesic(Geodesic::vertical(Q(0)), HPoint::make(Real(0), Real(1)), Real(1e-30)));
  CHECK_FALSE(point_on_geodesic(g5, HPoint::make(Real(0), Real(1)), Real(1e-12)));
}
