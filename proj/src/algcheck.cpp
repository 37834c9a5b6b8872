#include "specgeo/algcheck.hpp"

#include <boost/multiprecision/eigen.hpp>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace specgeo {

namespace {

using MatrixR = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

// Powers 0..d of v.
std::vector<Real> powers(const Real& v, int d) {
  std::vector<Real> p(d + 1);
  p[0] = 1;
  for (int k = 1; k <= d; ++k) p[k] = p[k - 1] * v;
  return p;
}

Real eval_normalized(const std::vector<Exponents>& monos, const std::vector<Real>& c, int d,
                     const Real& x, const Real& y) {
  auto px = powers(x, d), py = powers(y, d);
  Real acc = 0;
  for (std::size_t k = 0; k < monos.size(); ++k) acc += c[k] * px[monos[k].first] * py[monos[k].second];
  return acc;
}

Real binom(int n, int k) {
  Real r = 1;
  for (int i = 1; i <= k; ++i) r = r * Real(n - k + i) / Real(i);
  return r;
}

void normalize_unit(std::vector<Real>& c) {
  Real n = 0;
  for (const auto& v : c) n += v * v;
  n = sqrt(n);
  if (n == 0) return;
  for (auto& v : c) v /= n;
}

// Deterministic sign: largest-magnitude entry positive.
void fix_sign(std::vector<Real>& c) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < c.size(); ++k)
    if (abs(c[k]) > abs(c[best])) best = k;
  if (!c.empty() && c[best] < 0)
    for (auto& v : c) v = -v;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double point_to_sample(const PlanePoint& q, const std::vector<PlanePoint>& pts, bool path) {
  double qx = static_cast<double>(q.x), qy = static_cast<double>(q.y);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < pts.size(); ++k) {
    double ax = static_cast<double>(pts[k].x), ay = static_cast<double>(pts[k].y);
    best = std::min(best, std::hypot(qx - ax, qy - ay));
    if (path && k + 1 < pts.size()) {
      double bx = static_cast<double>(pts[k + 1].x), by = static_cast<double>(pts[k + 1].y);
      double dx = bx - ax, dy = by - ay, len2 = dx * dx + dy * dy;
      if (len2 > 0) {
        double t = std::clamp(((qx - ax) * dx + (qy - ay) * dy) / len2, 0.0, 1.0);
        best = std::min(best, std::hypot(qx - ax - t * dx, qy - ay - t * dy));
      }
    }
  }
  return best;
}

}  // namespace

AffineNormalization AffineNormalization::fit_box(const std::vector<PlanePoint>& pts) {
  require(!pts.empty(), "normalization needs points");
  Real xlo = pts[0].x, xhi = pts[0].x, ylo = pts[0].y, yhi = pts[0].y;
  for (const auto& p : pts) {
    if (p.x < xlo) xlo = p.x;
    if (p.x > xhi) xhi = p.x;
    if (p.y < ylo) ylo = p.y;
    if (p.y > yhi) yhi = p.y;
  }
  AffineNormalization n;
  n.cx = (xlo + xhi) / 2;
  n.cy = (ylo + yhi) / 2;
  Real hx = (xhi - xlo) / 2, hy = (yhi - ylo) / 2;
  n.scale = hx > hy ? hx : hy;
  if (n.scale == 0) n.scale = 1;
  return n;
}

PlanePoint AffineNormalization::apply(const PlanePoint& p) const {
  return {(p.x - cx) / scale, (p.y - cy) / scale};
}

std::vector<Exponents> monomials(int d) {
  std::vector<Exponents> out;
  for (int t = 0; t <= d; ++t)
    for (int i = t; i >= 0; --i) out.push_back({i, t - i});
  return out;
}

Real FitReport::eval(const Real& x, const Real& y) const {
  PlanePoint q = normalization.apply({x, y});
  return eval_normalized(monomials, coeffs, degree, q.x, q.y);
}

std::map<Exponents, Real> FitReport::original_coefficients() const {
  // (x - cx)^i (y - cy)^j / scale^(i + j), expanded.
  std::map<Exponents, Real> out;
  const Real& s = normalization.scale;
  for (std::size_t k = 0; k < monomials.size(); ++k) {
    auto [i, j] = monomials[k];
    Real lead = coeffs[k] / pow(s, i + j);
    for (int a = 0; a <= i; ++a) {
      Real ta = binom(i, a) * pow(-normalization.cx, i - a);
      for (int b = 0; b <= j; ++b) out[{a, b}] += lead * ta * binom(j, b) * pow(-normalization.cy, j - b);
    }
  }
  return out;
}

FitReport fit_algebraic(const PlaneSample& s, int d, const PrecisionCtx& ctx) {
  require(!s.points.empty(), "fit_algebraic needs samples");
  ScopedPrecision sp(ctx.bits);
  return fit_algebraic(s, d, ctx, AffineNormalization::fit_box(s.points));
}

FitReport fit_algebraic(const PlaneSample& s, int d, const PrecisionCtx& ctx,
                        const AffineNormalization& norm) {
  if (d < 1) throw PreconditionError("fit_algebraic: degree must be >= 1");
  FitReport rep;
  rep.degree = d;
  rep.monomials = monomials(d);
  const std::size_t M = rep.monomials.size(), n = s.points.size();
  if (n < 2 * M)
    throw PreconditionError("fit_algebraic: need at least " + std::to_string(2 * M) +
                            " samples for degree " + std::to_string(d));
  ScopedPrecision sp(ctx.bits);
  rep.normalization = norm;
  rep.samples = n;
  rep.bits = ctx.bits;

  MatrixR A(n, M);
  for (std::size_t r = 0; r < n; ++r) {
    PlanePoint q = norm.apply(s.points[r]);
    auto px = powers(q.x, d), py = powers(q.y, d);
    for (std::size_t k = 0; k < M; ++k) A(r, k) = px[rep.monomials[k].first] * py[rep.monomials[k].second];
  }
  // QR first so the SVD runs on an M x M triangle.
  Eigen::HouseholderQR<MatrixR> qr(A);
  MatrixR R = qr.matrixQR().topRows(M).template triangularView<Eigen::Upper>();
  Eigen::JacobiSVD<MatrixR> svd(R, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  rep.sigma_min = sv(M - 1);
  rep.residual = rep.sigma_min / sqrt(Real(n));
  rep.gap_ratio = sv(M - 2) == 0 ? Real(1) : Real(rep.sigma_min / sv(M - 2));
  rep.coeffs.resize(M);
  for (std::size_t k = 0; k < M; ++k) rep.coeffs[k] = svd.matrixV()(k, M - 1);
  normalize_unit(rep.coeffs);
  fix_sign(rep.coeffs);
  return rep;
}

Real certificate_residual(const FitReport& cert, const PlaneSample& s) {
  require(!s.points.empty(), "certificate_residual needs samples");
  ScopedPrecision sp(cert.bits);
  Real acc = 0;
  for (const auto& p : s.points) {
    PlanePoint q = cert.normalization.apply(p);
    Real v = eval_normalized(cert.monomials, cert.coeffs, cert.degree, q.x, q.y);
    acc += v * v;
  }
  return sqrt(acc / Real(s.points.size()));
}

std::string BialgebraicVerdict::label() const {
  if (certified) return "WeaklyBialgebraic(" + std::to_string(certificate->degree) + ")";
  return "NoFitUpTo(" + std::to_string(dmax) + ")";
}

PlaneSample geodesic_j_sample(const Geodesic& g, std::size_t n, const PrecisionCtx& ctx,
                              std::optional<std::uint64_t> seed) {
  require(n >= 2, "geodesic_j_sample needs n >= 2");
  ScopedPrecision sp(ctx.bits);
  PlaneSample out;
  out.provenance = to_string(g);
  std::vector<HPoint> zs;
  if (seed) {
    auto [lo, hi] = resolve_window(g, SampleWindow::one_period());
    std::mt19937_64 rng(*seed);
    std::vector<Real> s(n);
    for (auto& v : s) v = lo + (hi - lo) * Real(uniform01(rng));
    std::sort(s.begin(), s.end());
    for (const auto& v : s) zs.push_back(geodesic_at(g, v));
  } else {
    zs = sample_geodesic(g, n, SampleWindow::one_period());
  }
  for (const auto& z : zs) {
    auto [x, y] = J(z, ctx);
    out.points.push_back({x, y});
  }
  return out;
}

BialgebraicVerdict certify_sample(const PlaneSample& s, int dmax, const VerdictOptions& opt,
                                  const PrecisionCtx& ctx) {
  require(dmax >= 1, "dmax must be >= 1");
  ScopedPrecision sp(ctx.bits);
  BialgebraicVerdict v;
  v.dmax = dmax;
  AffineNormalization norm = AffineNormalization::fit_box(s.points);
  Real prev = 1;  // the constant monomial alone has residual 1
  for (int d = 1; d <= dmax; ++d) {
    FitReport f = fit_algebraic(s, d, ctx, norm);
    v.residuals.push_back(f.residual);
    bool decisive = f.residual <= Real(opt.gap_tol) * prev;
    if (f.residual < Real(opt.fit_tol) && decisive) {
      v.certified = true;
      v.certificate = std::move(f);
      return v;
    }
    prev = f.residual;
  }
  return v;
}

BialgebraicVerdict bialgebraic_verdict(const Geodesic& g, int dmax, const VerdictOptions& opt,
                                       const PrecisionCtx& ctx) {
  require(dmax >= 1, "dmax must be >= 1");
  return certify_sample(geodesic_j_sample(g, opt.samples, ctx, opt.seed), dmax, opt, ctx);
}

std::string to_string(Containment c) { return c == Containment::Strong ? "Strong" : "WeakOnly"; }

std::vector<PlanePoint> certificate_zeros(const FitReport& cert, double box_factor, int lines,
                                          const PrecisionCtx& ctx) {
  require(lines >= 2 && box_factor > 0, "invalid scanline box");
  ScopedPrecision sp(ctx.bits);
  const int per_line = 4 * lines;
  const Real b = Real(box_factor);
  const Real stop = pow(Real(2), -static_cast<int>(ctx.bits / 2));
  auto f = [&](const Real& x, const Real& y) {
    return eval_normalized(cert.monomials, cert.coeffs, cert.degree, x, y);
  };
  std::vector<PlanePoint> out;
  auto emit = [&](const Real& x, const Real& y) {
    const auto& nz = cert.normalization;
    out.push_back({x * nz.scale + nz.cx, y * nz.scale + nz.cy});
  };
  for (int dir = 0; dir < 2; ++dir) {
    for (int l = 0; l < lines; ++l) {
      // Even line counts keep the scanlines off the axes.
      Real fixed = -b + 2 * b * Real(l) / Real(lines - 1);
      auto at = [&](const Real& t) { return dir == 0 ? f(t, fixed) : f(fixed, t); };
      Real t0 = -b, f0 = at(t0);
      for (int k = 1; k <= per_line; ++k) {
        Real t1 = -b + 2 * b * Real(k) / Real(per_line), f1 = at(t1);
        if (f0 == 0) {
          dir == 0 ? emit(t0, fixed) : emit(fixed, t0);
        } else if ((f0 < 0) != (f1 < 0) && f1 != 0) {
          Real a = t0, c = t1, fa = f0, fc = f1;
          int side = 0;
          for (int it = 0; it < 400 && c - a > stop; ++it) {
            Real t = (a * fc - c * fa) / (fc - fa);
            if (!(t > a && t < c)) t = (a + c) / 2;
            Real ft = at(t);
            if (ft == 0) {
              a = c = t;
              break;
            }
            if ((ft < 0) == (fc < 0)) {
              c = t;
              fc = ft;
              if (side == 1) fa /= 2;
              side = 1;
            } else {
              a = t;
              fa = ft;
              if (side == -1) fc /= 2;
              side = -1;
            }
          }
          Real r = (a + c) / 2;
          dir == 0 ? emit(r, fixed) : emit(fixed, r);
        }
        t0 = t1;
        f0 = f1;
      }
    }
  }
  return out;
}

ContainmentReport strong_vs_weak(const PlaneSample& s, const FitReport& cert,
                                 const PrecisionCtx& ctx, double cover_tol) {
  ScopedPrecision sp(ctx.bits);
  ContainmentReport rep;
  rep.cover_tol = cover_tol;
  std::vector<PlanePoint> sample_n;
  for (const auto& p : s.points) sample_n.push_back(cert.normalization.apply(p));
  auto zeros = certificate_zeros(cert, 1.5, 80, ctx);
  rep.zero_points = zeros.size();
  for (const auto& z : zeros) {
    double d = point_to_sample(cert.normalization.apply(z), sample_n,
                               s.kind == PlaneSample::Kind::Curve);
    rep.max_distance = std::max(rep.max_distance, d);
  }
  rep.verdict = !zeros.empty() && rep.max_distance <= cover_tol ? Containment::Strong
                                                                 : Containment::WeakOnly;
  return rep;
}

Real certificate_distance(const FitReport& cert, std::int64_t N) {
  const PhiTilde& phi = exact_phi_tilde(N);
  if (phi.total_degree() != cert.degree) return std::numeric_limits<Real>::infinity();
  ScopedPrecision sp(cert.bits);
  const auto& nz = cert.normalization;
  // Phi~(scale x' + cx, scale y' + cy) in the normalized basis.
  std::map<Exponents, Real> acc;
  for (const auto& [e, c] : phi.terms) {
    auto [i, j] = e;
    Real cr = to_real(c);
    for (int a = 0; a <= i; ++a) {
      Real ta = cr * binom(i, a) * pow(nz.scale, a) * pow(nz.cx, i - a);
      for (int b = 0; b <= j; ++b) acc[{a, b}] += ta * binom(j, b) * pow(nz.scale, b) * pow(nz.cy, j - b);
    }
  }
  std::vector<Real> ref(cert.monomials.size());
  for (std::size_t k = 0; k < ref.size(); ++k) {
    auto it = acc.find(cert.monomials[k]);
    if (it != acc.end()) ref[k] = it->second;
  }
  normalize_unit(ref);
  Real dot = 0;
  for (std::size_t k = 0; k < ref.size(); ++k) dot += ref[k] * cert.coeffs[k];
  Real dist = 0;
  for (std::size_t k = 0; k < ref.size(); ++k) {
    Real r = dot < 0 ? Real(-ref[k]) : ref[k];
    dist += (r - cert.coeffs[k]) * (r - cert.coeffs[k]);
  }
  return sqrt(dist);
}

Real zero_set_agreement(const FitReport& cert, std::int64_t N, std::size_t count,
                        const PrecisionCtx& ctx) {
  ScopedPrecision sp(ctx.bits);
  auto zeros = certificate_zeros(cert, 1.0, 40, ctx);
  if (zeros.empty()) return std::numeric_limits<Real>::infinity();
  PhiTildeEvaluator phi(N, ctx);
  Real worst = 0;
  std::size_t stride = std::max<std::size_t>(1, zeros.size() / std::max<std::size_t>(1, count));
  for (std::size_t k = 0; k < zeros.size(); k += stride) {
    Real r = phi(zeros[k].x, zeros[k].y).normalized;
    if (r > worst) worst = r;
  }
  return worst;
}

std::pair<Real, Real> exp_map(const Real& x, const Real& y) {
  Real two_pi = 2 * real_pi();
  Real m = exp(-two_pi * y);
  return {m * cos(two_pi * x), m * sin(two_pi * x)};
}

PlaneSample exp_line_sample(const Real& x0, const Real& y0, const Real& dx, const Real& dy,
                            const Real& lo, const Real& hi, std::size_t n) {
  require(n >= 1, "exp_line_sample needs n >= 1");
  PlaneSample out;
  out.provenance = "E(line)";
  for (std::size_t k = 0; k < n; ++k) {
    Real s = lo + (hi - lo) * Real(k) / Real(n);
    auto [u, v] = exp_map(x0 + s * dx, y0 + s * dy);
    out.points.push_back({u, v});
  }
  return out;
}

std::vector<PlanePoint> exp_special_points(std::size_t count) {
  require(count >= 1, "exp_special_points needs count >= 1");
  std::vector<PlanePoint> out;
  for (std::size_t k = 0; k < count; ++k) {
    // Exact values at the quarter turns keep the axis points clean.
    std::size_t q = 4 * k;
    if (q % count == 0) {
      static const int cs[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
      auto c = cs[(q / count) % 4];
      out.push_back({Real(c[0]), Real(c[1])});
      continue;
    }
    auto [u, v] = exp_map(Real(k) / Real(count), Real(0));
    out.push_back({u, v});
  }
  return out;
}

std::optional<Real> circle_squared_radius(const FitReport& cert, const Real& rel_tol) {
  if (cert.degree != 2) return std::nullopt;
  ScopedPrecision sp(cert.bits);
  auto c = cert.original_coefficients();
  auto get = [&](int i, int j) {
    auto it = c.find({i, j});
    return it == c.end() ? Real(0) : it->second;
  };
  Real a = get(2, 0), b = get(0, 2);
  Real big = abs(a) > abs(b) ? Real(abs(a)) : Real(abs(b));
  if (big == 0) return std::nullopt;
  for (auto [i, j] : {Exponents{1, 1}, Exponents{1, 0}, Exponents{0, 1}})
    if (abs(get(i, j)) > rel_tol * big) return std::nullopt;
  if (abs(a - b) > rel_tol * big) return std::nullopt;
  Real r2 = -get(0, 0) / ((a + b) / 2);
  if (r2 <= 0) return std::nullopt;
  return r2;
}

SpecialPointFit special_point_fit(const Geodesic& g, std::size_t m, int dmax,
                                  const VerdictOptions& opt, const PrecisionCtx& ctx) {
  ScopedPrecision sp(ctx.bits);
  SpecialPointFit out;
  out.level = static_cast<std::int64_t>(matrix_from_geodesic(g).level());
  PlaneSample s;
  s.kind = PlaneSample::Kind::Scatter;
  s.provenance = "special points of " + to_string(g);
  for (const auto& p : special_points_on_geodesic(g, m)) {
    auto [x, y] = J(p.numeric(), ctx);
    s.points.push_back({x, y});
  }
  BialgebraicVerdict v = certify_sample(s, dmax, opt, ctx);
  if (!v.certified) {
    out.fit = fit_algebraic(s, dmax, ctx);
    return out;
  }
  out.certified = true;
  out.fit = *v.certificate;
  out.zero_residual = zero_set_agreement(out.fit, out.level, 100, ctx);
  if (out.level <= kExactPhiMax) {
    out.coeff_distance = certificate_distance(out.fit, out.level);
    out.matched = out.coeff_distance < Real(1e-8);
  } else {
    out.matched = out.zero_residual < Real(opt.fit_tol);
  }
  return out;
}

}  // namespace specgeo
