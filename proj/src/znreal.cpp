#include "specgeo/znreal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace specgeo {

namespace {

using ChartPt = std::pair<double, double>;

double dist(const ChartPt& a, const ChartPt& b) { return std::hypot(a.first - b.first, a.second - b.second); }

double point_segment(const ChartPt& p, const ChartPt& a, const ChartPt& b) {
  double dx = b.first - a.first, dy = b.second - a.second;
  double len2 = dx * dx + dy * dy;
  double t = 0;
  if (len2 > 0) t = std::clamp(((p.first - a.first) * dx + (p.second - a.second) * dy) / len2, 0.0, 1.0);
  return std::hypot(p.first - (a.first + t * dx), p.second - (a.second + t * dy));
}

double segment_segment(const ChartPt& a0, const ChartPt& a1, const ChartPt& b0, const ChartPt& b1) {
  auto cross = [](const ChartPt& o, const ChartPt& p, const ChartPt& q) {
    return (p.first - o.first) * (q.second - o.second) - (p.second - o.second) * (q.first - o.first);
  };
  double d1 = cross(a0, a1, b0), d2 = cross(a0, a1, b1), d3 = cross(b0, b1, a0), d4 = cross(b0, b1, a1);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return 0;
  return std::min({point_segment(a0, b0, b1), point_segment(a1, b0, b1), point_segment(b0, a0, a1),
                   point_segment(b1, a0, a1)});
}

Geodesic geodesic_of(const Mat2Z& A) { return geodesic_from_matrix(GeodesicMatrix::from(A)); }

std::int64_t level_of(const Mat2Z& A) {
  require_geodesic_matrix(A);
  return static_cast<std::int64_t>(BigInt(-A.det()));
}

std::string fmt(double v) { return format_double(v, 6); }

bool conjugate_up_to_sign(const Mat2Z& A, const Mat2Z& B) {
  if (A == B || A == -B) return true;
  if (A.det() != B.det()) return false;
  BigInt N = -A.det();
  if (is_perfect_square(N)) {
    return are_conjugate_bruteforce(A, B, 8) || are_conjugate_bruteforce(A, -B, 8);
  }
  return are_conjugate(A, B) || are_conjugate(A, -B);
}

}  // namespace

Chart Chart::for_level(std::int64_t N) {
  require(N >= 1, "chart level must be positive");
  Chart c;
  double R = std::exp(2 * 3.14159265358979323846 * std::sqrt(static_cast<double>(N))) + 3000.0;
  c.log_scale = std::log1p(R);
  return c;
}

std::pair<double, double> Chart::to_chart(const Real& x, const Real& y) const {
  double xd = static_cast<double>(x), yd = static_cast<double>(y);
  double r = std::hypot(xd, yd);
  if (r == 0) return {0.0, 0.0};
  double s = std::log1p(r) / (log_scale * r);
  return {xd * s, yd * s};
}

std::pair<Real, Real> Chart::from_chart(double u, double v) const {
  double rho = std::hypot(u, v);
  if (rho == 0) return {Real(0), Real(0)};
  Real mag = expm1(Real(rho) * Real(log_scale));
  return {Real(u) / Real(rho) * mag, Real(v) / Real(rho) * mag};
}

std::string provenance_for(const Mat2Z& A) { return "A=" + to_string(A); }

PlaneSample geodesic_image(const Mat2Z& A, std::size_t n, const PrecisionCtx& ctx) {
  require(n >= 2, "geodesic_image needs n >= 2");
  ScopedPrecision sp(ctx.bits);
  Geodesic g = geodesic_of(A);
  PlaneSample out;
  out.provenance = provenance_for(A);
  for (const HPoint& z : sample_geodesic(g, n, SampleWindow::one_period())) {
    auto [x, y] = J(z, ctx);
    out.points.push_back({x, y});
  }
  return out;
}

ImagePolyline image_polyline(const Mat2Z& A, const Chart& chart, double max_step,
                             const PrecisionCtx& ctx) {
  require(max_step > 0, "max_step must be positive");
  ScopedPrecision sp(ctx.bits);
  Geodesic g = geodesic_of(A);
  auto [lo, hi] = resolve_window(g, SampleWindow::one_period());
  auto eval = [&](const Real& s) {
    auto [x, y] = J(geodesic_at(g, s), ctx);
    return chart.to_chart(x, y);
  };
  ImagePolyline out;
  out.A = A;
  const int base = 256;
  Real prev_s = lo;
  ChartPt prev = eval(lo);
  out.s.push_back(prev_s);
  out.chart.push_back(prev);
  std::function<void(const Real&, const ChartPt&, const Real&, const ChartPt&, int)> refine =
      [&](const Real& s0, const ChartPt& p0, const Real& s1, const ChartPt& p1, int depth) {
        if (depth < 14 && dist(p0, p1) > max_step) {
          Real sm = (s0 + s1) / 2;
          ChartPt pm = eval(sm);
          refine(s0, p0, sm, pm, depth + 1);
          refine(sm, pm, s1, p1, depth + 1);
          return;
        }
        out.s.push_back(s1);
        out.chart.push_back(p1);
      };
  for (int k = 1; k <= base; ++k) {
    Real s = lo + (hi - lo) * Real(k) / Real(base);
    ChartPt p = eval(s);
    refine(prev_s, prev, s, p, 0);
    prev_s = s;
    prev = p;
  }
  return out;
}

double distance_to_polyline(const ChartPt& p, const ImagePolyline& poly) {
  double best = std::numeric_limits<double>::infinity();
  if (poly.chart.size() == 1) return dist(p, poly.chart[0]);
  for (std::size_t i = 0; i + 1 < poly.chart.size(); ++i)
    best = std::min(best, point_segment(p, poly.chart[i], poly.chart[i + 1]));
  return best;
}

std::vector<Mat2Z> tilde_representatives(std::int64_t N) {
  if (N == 1) return {Mat2Z{-1, 0, 0, 1}, Mat2Z{0, 1, 1, 0}};
  ClassSet cs = enumerate_classes(BigInt(N));
  std::vector<Mat2Z> out;
  for (const auto& [i, j] : cs.tilde_pairs) out.push_back(cs.reps[i]);
  return out;
}

VerificationReport verify_containment(std::int64_t N, const Mat2Z& A, std::size_t n,
                                      const Real& tol, const PrecisionCtx& ctx) {
  if (level_of(A) != N) throw PreconditionError("verify_containment: |det A| must equal N");
  ScopedPrecision sp(ctx.bits);
  PlaneSample img = geodesic_image(A, n, ctx);
  PhiTildeEvaluator phi(N, ctx);
  VerificationReport rep;
  rep.claim = "containment N=" + std::to_string(N) + " " + img.provenance;
  rep.tolerance = tol;
  rep.max_residual = 0;
  PlanePoint worst = img.points.front();
  for (const auto& p : img.points) {
    Real r = phi(p.x, p.y).normalized;
    if (r > rep.max_residual) {
      rep.max_residual = r;
      worst = p;
    }
  }
  rep.witnesses.push_back(worst);
  rep.pass = rep.max_residual <= tol;
  rep.detail["samples"] = std::to_string(n);
  rep.detail["path"] = to_string(phi.path());
  return rep;
}

ZeroScan scan_zero_set(std::int64_t N, const GridSpec& grid, const PrecisionCtx& ctx,
                       bool force_proxy) {
  require(grid.pitch > 0 && grid.hi > grid.lo, "invalid grid");
  ScopedPrecision sp(ctx.bits);
  const Chart chart = Chart::for_level(N);
  PhiTildeEvaluator phi(N, ctx, force_proxy);
  const int K = static_cast<int>(std::lround((grid.hi - grid.lo) / grid.pitch));
  auto node = [&](int k) { return grid.lo + grid.pitch * k; };
  auto signed_at = [&](double u, double v) {
    auto [x, y] = chart.from_chart(u, v);
    return phi(x, y).signed_value;
  };

  std::vector<Real> f((K + 1) * (K + 1));
  for (int iv = 0; iv <= K; ++iv)
    for (int iu = 0; iu <= K; ++iu) f[iv * (K + 1) + iu] = signed_at(node(iu), node(iv));

  ZeroScan out;
  out.grid_points = f.size();
  out.path = phi.path();
  out.zeros.kind = PlaneSample::Kind::Scatter;
  out.zeros.provenance = "scan N=" + std::to_string(N);

  // Illinois bracketing on the segment p0 -> p1.
  auto refine = [&](ChartPt p0, ChartPt p1, Real f0, Real f1) {
    double a = 0, b = 1;
    const double width = dist(p0, p1);
    auto at = [&](double t) {
      return ChartPt{p0.first + t * (p1.first - p0.first), p0.second + t * (p1.second - p0.second)};
    };
    Real fa = f0, fb = f1;
    int side = 0;
    double t = 0.5;
    for (int it = 0; it < 80 && (b - a) * width > grid.detect_tol; ++it) {
      Real den = fb - fa;
      t = den == 0 ? (a + b) / 2 : static_cast<double>((Real(a) * fb - Real(b) * fa) / den);
      if (!(t > a && t < b)) t = (a + b) / 2;
      ChartPt pt = at(t);
      Real ft = signed_at(pt.first, pt.second);
      if (ft == 0) {
        a = b = t;
        break;
      }
      if ((ft > 0) == (fb > 0)) {
        b = t;
        fb = ft;
        if (side == 1) fa /= 2;
        side = 1;
      } else {
        a = t;
        fa = ft;
        if (side == -1) fb /= 2;
        side = -1;
      }
    }
    ChartPt z = at((a + b) / 2);
    auto [x, y] = chart.from_chart(z.first, z.second);
    out.chart_points.push_back(z);
    out.zeros.points.push_back({x, y});
  };

  auto sign = [](const Real& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); };
  for (int iv = 0; iv <= K; ++iv) {
    for (int iu = 0; iu <= K; ++iu) {
      const Real& c = f[iv * (K + 1) + iu];
      if (sign(c) == 0) {
        auto [x, y] = chart.from_chart(node(iu), node(iv));
        out.chart_points.push_back({node(iu), node(iv)});
        out.zeros.points.push_back({x, y});
        continue;
      }
      if (iu < K) {
        const Real& r = f[iv * (K + 1) + iu + 1];
        if (sign(c) * sign(r) < 0) refine({node(iu), node(iv)}, {node(iu + 1), node(iv)}, c, r);
      }
      if (iv < K) {
        const Real& u = f[(iv + 1) * (K + 1) + iu];
        if (sign(c) * sign(u) < 0) refine({node(iu), node(iv)}, {node(iu), node(iv + 1)}, c, u);
      }
    }
  }
  return out;
}

VerificationReport verify_cover(std::int64_t N, const GridSpec& grid, const PrecisionCtx& ctx,
                                const ZeroScan* scan) {
  ZeroScan local;
  if (!scan) {
    local = scan_zero_set(N, grid, ctx);
    scan = &local;
  }
  const Chart chart = Chart::for_level(N);
  std::vector<ImagePolyline> polys;
  for (const auto& A : tilde_representatives(N))
    polys.push_back(image_polyline(A, chart, grid.pitch / 4, ctx));

  VerificationReport rep;
  rep.claim = "cover N=" + std::to_string(N);
  rep.tolerance = Real(grid.cover_tol());
  double worst = 0;
  std::size_t worst_i = 0;
  for (std::size_t i = 0; i < scan->chart_points.size(); ++i) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& p : polys) d = std::min(d, distance_to_polyline(scan->chart_points[i], p));
    if (d > worst) {
      worst = d;
      worst_i = i;
    }
  }
  rep.max_residual = Real(worst);
  if (!scan->zeros.points.empty()) rep.witnesses.push_back(scan->zeros.points[worst_i]);
  rep.pass = !scan->chart_points.empty() && worst <= grid.cover_tol();
  rep.detail["pitch"] = fmt(grid.pitch);
  rep.detail["detect_tol"] = fmt(grid.detect_tol);
  rep.detail["cover_tol"] = fmt(grid.cover_tol());
  rep.detail["zero_points"] = std::to_string(scan->chart_points.size());
  rep.detail["grid_points"] = std::to_string(scan->grid_points);
  rep.detail["classes"] = std::to_string(polys.size());
  rep.detail["path"] = to_string(scan->path);
  return rep;
}

VerificationReport verify_distinct(std::int64_t N, const Mat2Z& A, const Mat2Z& B, std::size_t n,
                                   const PrecisionCtx& ctx, double separation) {
  if (level_of(A) != N || level_of(B) != N)
    throw PreconditionError("verify_distinct: |det| must equal N for both matrices");
  if (conjugate_up_to_sign(A, B))
    throw PreconditionError("verify_distinct: A and B lie in the same +- class");
  const Chart chart = Chart::for_level(N);
  VerificationReport rep;
  rep.claim = "distinct N=" + std::to_string(N) + " " + provenance_for(A) + " vs " + provenance_for(B);
  rep.tolerance = 0;
  double best = -1;
  PlanePoint witness{Real(0), Real(0)};
  for (int dir = 0; dir < 2; ++dir) {
    const Mat2Z& P = dir == 0 ? A : B;
    const Mat2Z& Q = dir == 0 ? B : A;
    PlaneSample img = geodesic_image(P, n, ctx);
    ImagePolyline other = image_polyline(Q, chart, 0.005, ctx);
    for (const auto& p : img.points) {
      double d = distance_to_polyline(chart.to_chart(p.x, p.y), other);
      if (d > best) {
        best = d;
        witness = p;
      }
    }
  }
  rep.max_residual = Real(separation - best);
  rep.witnesses.push_back(witness);
  rep.pass = rep.max_residual <= rep.tolerance;
  rep.detail["separation"] = fmt(separation);
  rep.detail["witness_distance"] = fmt(best);
  return rep;
}

namespace {

struct Refined {
  bool ok = false;
  ComplexHP w;
};

Refined refine_pair(const Geodesic& ga, const Geodesic& gb, Real s, Real t, const Real& tol,
                    const PrecisionCtx& ctx) {
  auto residual = [&](const Real& s_, const Real& t_, JDerivative& da, JDerivative& db) {
    da = j_with_derivative(geodesic_at(ga, s_), ctx);
    db = j_with_derivative(geodesic_at(gb, t_), ctx);
    return da.j - db.j;
  };
  JDerivative da, db;
  ComplexHP F = residual(s, t, da, db);
  Real mu = Real(1e-3);
  for (int it = 0; it < 400; ++it) {
    if (F.abs() <= tol * (1 + da.j.abs())) return {true, da.j};
    ComplexHP cs = da.dj * geodesic_tangent(ga, s);
    ComplexHP ct = -(db.dj * geodesic_tangent(gb, t));
    // Normal equations of the 2x2 real system [cs ct] (ds, dt) = -F.
    Real a11 = cs.norm(), a22 = ct.norm(), a12 = cs.re * ct.re + cs.im * ct.im;
    Real g1 = -(cs.re * F.re + cs.im * F.im), g2 = -(ct.re * F.re + ct.im * F.im);
    Real scale = a11 + a22;
    if (scale == 0) return {};
    bool accepted = false;
    for (int tries = 0; tries < 40 && !accepted; ++tries) {
      Real d1 = a11 + mu * scale, d2 = a22 + mu * scale;
      Real det = d1 * d2 - a12 * a12;
      Real ds = (g1 * d2 - a12 * g2) / det, dt = (d1 * g2 - a12 * g1) / det;
      JDerivative na, nb;
      ComplexHP Fn = residual(s + ds, t + dt, na, nb);
      if (Fn.abs() < F.abs()) {
        s += ds;
        t += dt;
        F = Fn;
        da = na;
        db = nb;
        mu = mu / 3 < Real(1e-30) ? Real(1e-30) : Real(mu / 3);
        accepted = true;
      } else {
        mu *= 4;
      }
    }
    if (!accepted) break;
  }
  if (F.abs() <= tol * (1 + da.j.abs())) return {true, da.j};
  return {};
}

}  // namespace

IntersectionResult find_intersections(const Mat2Z& A, const Mat2Z& B, std::size_t n,
                                      const Real& tol, const PrecisionCtx& ctx) {
  require(n >= 2, "find_intersections needs n >= 2");
  IntersectionResult out;
  if (conjugate_up_to_sign(A, B)) {
    out.full_overlap = true;
    return out;
  }
  ScopedPrecision sp(ctx.bits);
  const std::int64_t N = std::max(level_of(A), level_of(B));
  const Chart chart = Chart::for_level(N);
  // Polyline resolution follows the requested sample count.
  const double step = std::min(0.01, 2.0 / static_cast<double>(n));
  ImagePolyline pa = image_polyline(A, chart, step, ctx);
  ImagePolyline pb = image_polyline(B, chart, step, ctx);

  struct Cand {
    double d;
    std::size_t i, j;
  };
  std::vector<Cand> cands;
  const double near = 2 * step;
  for (std::size_t i = 0; i + 1 < pa.chart.size(); ++i) {
    for (std::size_t j = 0; j + 1 < pb.chart.size(); ++j) {
      double d = segment_segment(pa.chart[i], pa.chart[i + 1], pb.chart[j], pb.chart[j + 1]);
      if (d < near) cands.push_back({d, i, j});
    }
  }
  out.candidates = cands.size();
  std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
    if (x.d != y.d) return x.d < y.d;
    return x.i != y.i ? x.i < y.i : x.j < y.j;
  });
  std::vector<ChartPt> seeds_at;
  std::vector<Cand> seeds;
  for (const auto& c : cands) {
    ChartPt m = pa.chart[c.i];
    bool fresh = std::all_of(seeds_at.begin(), seeds_at.end(),
                             [&](const ChartPt& q) { return dist(q, m) > 0.03; });
    if (fresh) {
      seeds_at.push_back(m);
      seeds.push_back(c);
    }
    if (seeds.size() >= 64) break;
  }

  Geodesic ga = geodesic_of(A), gb = geodesic_of(B);
  for (const auto& c : seeds) {
    Real s = (pa.s[c.i] + pa.s[c.i + 1]) / 2, t = (pb.s[c.j] + pb.s[c.j + 1]) / 2;
    Refined r = refine_pair(ga, gb, s, t, tol, ctx);
    if (!r.ok) continue;
    bool dup = std::any_of(out.points.begin(), out.points.end(), [&](const PlanePoint& p) {
      return (ComplexHP(p.x, p.y) - r.w).abs() <= Real(1e-6) * (1 + r.w.abs());
    });
    if (!dup) out.points.push_back({r.w.re, r.w.im});
  }
  std::sort(out.points.begin(), out.points.end(), [](const PlanePoint& a, const PlanePoint& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  return out;
}

HausdorffResult image_hausdorff(const Mat2Z& A, const Mat2Z& B, std::size_t n,
                                const PrecisionCtx& ctx) {
  const std::int64_t N = std::max(level_of(A), level_of(B));
  const Chart chart = Chart::for_level(N);
  HausdorffResult out;
  for (int dir = 0; dir < 2; ++dir) {
    const Mat2Z& P = dir == 0 ? A : B;
    const Mat2Z& Q = dir == 0 ? B : A;
    PlaneSample img = geodesic_image(P, n, ctx);
    ImagePolyline other = image_polyline(Q, chart, 0.005, ctx);
    ChartPt prev{};
    for (std::size_t k = 0; k < img.points.size(); ++k) {
      ChartPt c = chart.to_chart(img.points[k].x, img.points[k].y);
      out.distance = std::max(out.distance, distance_to_polyline(c, other));
      if (k > 0) out.pitch = std::max(out.pitch, dist(prev, c));
      prev = c;
    }
  }
  return out;
}

VerificationReport lemniscate_check_on(const Geodesic& g, const SampleWindow& window,
                                       std::size_t n, const Real& tol, const PrecisionCtx& ctx) {
  require(n >= 2, "lemniscate_check needs n >= 2");
  ScopedPrecision sp(ctx.bits);
  VerificationReport rep;
  rep.claim = "lemniscate " + to_string(g);
  rep.tolerance = tol;
  rep.max_residual = 0;
  const Real sixteenth = Real(1) / 16;
  for (const HPoint& z : sample_geodesic(g, n, window)) {
    ComplexHP l = modular_lambda(z, ctx).value;
    Real a = l.norm();
    Real b = (l.re - 1) * (l.re - 1) + l.im * l.im;
    Real r = abs(a * b - sixteenth);
    if (r > rep.max_residual || rep.witnesses.empty()) {
      if (r > rep.max_residual) rep.max_residual = r;
      rep.witnesses.assign(1, {l.re, l.im});
    }
  }
  rep.pass = rep.max_residual <= tol;
  rep.detail["samples"] = std::to_string(n);
  return rep;
}

VerificationReport lemniscate_check(std::size_t n, const Real& tol, const PrecisionCtx& ctx) {
  ScopedPrecision sp(ctx.bits);
  return lemniscate_check_on(Geodesic::semicircle(Rational(1), Rational(2)),
                             SampleWindow::one_period(), n, tol, ctx);
}

}  // namespace specgeo
