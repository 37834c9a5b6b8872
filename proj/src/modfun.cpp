#include "specgeo/modfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>

#include "series.hpp"
#include "specgeo/quadclass.hpp"

namespace specgeo {

namespace detail {

namespace {
std::vector<std::int64_t> sigma_table(int k) {
  std::vector<std::int64_t> t(kSigmaLimit, 0);
  for (unsigned d = 1; d < kSigmaLimit; ++d) {
    std::int64_t pw = 1;
    for (int e = 0; e < k; ++e) pw *= d;
    for (unsigned n = d; n < kSigmaLimit; n += d) t[n] += pw;
  }
  return t;
}
}  // namespace

const std::vector<std::int64_t>& sigma3_table() {
  static const std::vector<std::int64_t> t = sigma_table(3);
  return t;
}
const std::vector<std::int64_t>& sigma5_table() {
  static const std::vector<std::int64_t> t = sigma_table(5);
  return t;
}

}  // namespace detail

using detail::Gauge;

PrecisionCtx PrecisionCtx::with_bits(unsigned bits) {
  PrecisionCtx c;
  c.bits = bits;
  c.qterms = std::max(64u, bits / 7 + 8);
  c.newton_tol = std::max(std::ldexp(1.0, -static_cast<int>(bits - bits / 8)), 1e-300);
  return c;
}

void PrecisionCtx::validate() const {
  if (bits < 64) throw PreconditionError("precision must be at least 64 bits");
  if (qterms < 16) throw PreconditionError("qterms must be at least 16");
  if (!(newton_tol > 0)) throw PreconditionError("newton_tol must be positive");
}

namespace {

double log_eps_for(unsigned bits) { return -(bits + 8.0) * 0.69314718055994531; }

BigInt floor_to_int(const Real& v) {
  Real f = floor(v);
  BigInt out;
  mpfr_get_z(out.backend().data(), f.backend().data(), MPFR_RNDD);
  return out;
}

template <class T>
Complex<T> reduce_point(Complex<T> z, Mat2Z* track) {
  using std::floor;
  for (int guard = 0; guard < 100000; ++guard) {
    if constexpr (std::is_same_v<T, Real>) {
      BigInt n = floor_to_int(z.re + Real(0.5));
      if (n != 0) {
        z.re -= to_real(n);
        if (track) *track = Mat2Z{1, -n, 0, 1} * *track;
      }
    } else {
      double n = floor(z.re + 0.5);
      z.re -= n;
    }
    T nz = z.norm();
    if (nz < 1) {
      z = Complex<T>(-z.re / nz, z.im / nz);
      if (track) *track = Mat2Z{0, -1, 1, 0} * *track;
    } else {
      return z;
    }
  }
  throw ConvergenceError("fundamental domain reduction did not terminate");
}

void check_tail(const Real& tail, const ComplexHP& value, const PrecisionCtx& ctx,
                const char* what) {
  if (tail / (1 + value.abs()) > ctx.newton_tol)
    throw PrecisionError(std::string(what) + ": series tail exceeds tolerance, raise precision");
}

Evaluation j_at_reduced(const ComplexHP& z0, const PrecisionCtx& ctx) {
  auto s = detail::q_series(z0, ctx.qterms, log_eps_for(ctx.bits));
  auto e = detail::eta_powers(s.p);
  ComplexHP delta = s.q * e.p24;
  ComplexHP e4sq = s.e4 * s.e4;
  Evaluation out;
  out.value = e4sq * s.e4 / delta;
  out.terms = s.terms;
  Real e4a = s.e4.abs(), da = delta.abs();
  out.tail_bound = (3 * (e4a + s.e4_tail) * (e4a + s.e4_tail) * s.e4_tail +
                    24 * e4a * e4a * e4a * s.p_tail) /
                   da;
  return out;
}

}  // namespace

std::pair<HPoint, Mat2Z> reduce_to_fund_domain(const HPoint& z) {
  if (!(z.y > 0)) throw PreconditionError("point must lie in the upper half-plane");
  Mat2Z m = Mat2Z::identity();
  ComplexHP r = reduce_point(z.as_complex(), &m);
  return {HPoint{r.re, r.im}, m};
}

Evaluation j_invariant(const HPoint& z, const PrecisionCtx& ctx) {
  ctx.validate();
  if (!(z.y > 0)) throw PreconditionError("j needs a point of the upper half-plane");
  ScopedPrecision sp(ctx.bits);
  ComplexHP z0 = reduce_point(z.as_complex(), nullptr);
  Evaluation out = j_at_reduced(z0, ctx);
  check_tail(out.tail_bound, out.value, ctx, "j");
  return out;
}

std::pair<Real, Real> J(const HPoint& z, const PrecisionCtx& ctx) {
  Evaluation e = j_invariant(z, ctx);
  return {e.value.re, e.value.im};
}

JDerivative j_with_derivative(const HPoint& z, const PrecisionCtx& ctx) {
  ctx.validate();
  if (!(z.y > 0)) throw PreconditionError("j needs a point of the upper half-plane");
  ScopedPrecision sp(ctx.bits);
  Mat2Z m = Mat2Z::identity();
  ComplexHP z0 = reduce_point(z.as_complex(), &m);
  ComplexHP f, df;
  detail::gauge_eval(Gauge::J, z0, ctx.qterms, log_eps_for(ctx.bits), f, df);
  // d(Mz)/dz = 1 / (cz + d)^2
  ComplexHP den = z.as_complex() * to_real(m.c) + ComplexHP(to_real(m.d));
  return {f, df / (den * den)};
}

namespace {

constexpr double kGaugeRadius = 600.0;

Gauge pick_gauge(const Complex<double>& w) {
  if ((w - Complex<double>(1728.0)).abs() < kGaugeRadius) return Gauge::Gamma3;
  if (w.abs() < kGaugeRadius) return Gauge::Gamma2;
  return Gauge::J;
}

// The root of gauge(z) = c consistent with w, nearest to the value `near`.
template <class T>
Complex<T> gauge_target(Gauge g, const Complex<T>& w, const Complex<T>& near) {
  using std::cos;
  using std::exp;
  using std::log;
  using std::sin;
  if (g == Gauge::J) return w;
  if (g == Gauge::Gamma3) {
    Complex<T> r = csqrt(w - Complex<T>(T(1728)));
    return ((r - near).norm() <= (-r - near).norm()) ? r : -r;
  }
  T wa = w.abs();
  T mag = wa == 0 ? T(0) : T(exp(log(wa) / 3));
  T ang = w.abs() == 0 ? T(0) : w.arg() / 3;
  const T third = 2 * pi_value<T>() / 3;
  Complex<T> best;
  T best_d = -1;
  for (int k = 0; k < 3; ++k) {
    T a = ang + third * k;
    Complex<T> r(mag * cos(a), mag * sin(a));
    T d = (r - near).norm();
    if (best_d < 0 || d < best_d) {
      best = r;
      best_d = d;
    }
  }
  return best;
}

struct SeedGrid {
  std::vector<Complex<double>> z;
  std::vector<Complex<double>> jv;
};

const SeedGrid& seed_grid() {
  static const SeedGrid g = [] {
    SeedGrid out;
    for (int ix = 0; ix <= 20; ++ix) {
      double x = -0.5 + 0.05 * ix;
      double ymin = std::sqrt(1.0 - x * x);
      for (double y = ymin; y <= 2.25; y += 0.04) {
        Complex<double> z(x, y), f, df;
        detail::gauge_eval(Gauge::J, z, 40, -40.0, f, df);
        out.z.push_back(z);
        out.jv.push_back(f);
      }
    }
    return out;
  }();
  return g;
}

// Newton for gauge(z) = target. J steps are re-reduced into the fundamental
// domain; the gamma gauges are not modular, so their iterates stay put.
template <class T>
bool newton(Gauge g, Complex<T>& z, const Complex<T>& target, unsigned cap, double log_eps,
            const T& step_tol, int max_iter) {
  for (int it = 0; it < max_iter; ++it) {
    if (g == Gauge::J) z = reduce_point(z, nullptr);
    Complex<T> f, df;
    detail::gauge_eval(g, z, cap, log_eps, f, df);
    if (df.norm() == 0) return false;
    Complex<T> step = (f - target) / df;
    T len = step.abs();
    if (len > T(0.25)) step *= T(0.25) / len;
    Complex<T> next = z - step;
    int halvings = 0;
    while (!(next.im > T(0.3)) && halvings < 30) {
      step *= T(0.5);
      next = z - step;
      ++halvings;
    }
    if (!(next.im > T(0.3))) return false;
    z = next;
    if (len <= step_tol * (1 + z.abs())) return true;
  }
  return false;
}

HPoint normalize_boundary(ComplexHP z, unsigned bits) {
  z = reduce_point(z, nullptr);
  Real tie = Real(std::ldexp(1.0, -static_cast<int>(bits / 2)));
  if (z.re < Real(-0.5) + tie) z.re += 1;
  if (abs(z.norm() - 1) < tie && z.re < 0) z.re = -z.re;
  return {z.re, z.im};
}

}  // namespace

HPoint j_invert(const ComplexHP& w_in, const PrecisionCtx& ctx) {
  ctx.validate();
  ScopedPrecision sp(ctx.bits);
  ComplexHP w(Real(w_in.re), Real(w_in.im));
  const double log_eps = log_eps_for(ctx.bits);
  const Real step_tol = Real(std::ldexp(1.0, -static_cast<int>(ctx.bits - 16)));
  const Real wabs = w.abs();

  auto accept = [&](const ComplexHP& z) -> bool {
    if (!(z.im > 0)) return false;
    ComplexHP z0 = reduce_point(z, nullptr);
    Evaluation e = j_at_reduced(z0, ctx);
    return (e.value - w).abs() <= Real(ctx.newton_tol) * (1 + wabs);
  };

  std::vector<Complex<double>> starts;
  Gauge gauge = Gauge::J;
  if (wabs > Real(5e4)) {
    // j ~ 1/q + 744 near the cusp.
    ComplexHP shifted = w - ComplexHP(Real(744));
    Real two_pi = 2 * real_pi();
    ComplexHP z(-shifted.arg() / two_pi, log(shifted.abs()) / two_pi);
    if (newton(Gauge::J, z, w, ctx.qterms, log_eps, step_tol, 200) && accept(z))
      return normalize_boundary(z, ctx.bits);
    starts.push_back(to_double(z));
  }

  Complex<double> wd = to_double(w);
  gauge = pick_gauge(wd);
  const SeedGrid& grid = seed_grid();
  std::vector<std::size_t> order(grid.z.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<double> score(order.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    score[i] = (grid.jv[i] - wd).abs() / (1 + wd.abs() + grid.jv[i].abs());
  std::partial_sort(order.begin(), order.begin() + 8, order.end(),
                    [&](std::size_t a, std::size_t b) { return score[a] < score[b]; });
  for (int k = 0; k < 8; ++k) starts.push_back(grid.z[order[k]]);

  for (const auto& s : starts) {
    Complex<double> zd = s, f, df;
    detail::gauge_eval(gauge, zd, 40, -40.0, f, df);
    Complex<double> td = gauge_target(gauge, wd, f);
    if (!newton(gauge, zd, td, 40, -40.0, 1e-13, 80)) continue;
    ComplexHP z = to_hp(zd);
    ComplexHP fz, dfz;
    detail::gauge_eval(gauge, z, ctx.qterms, log_eps, fz, dfz);
    ComplexHP target = gauge_target(gauge, w, fz);
    newton(gauge, z, target, ctx.qterms, log_eps, step_tol, 60);
    if (accept(z)) return normalize_boundary(z, ctx.bits);
  }
  throw ConvergenceError("j_invert did not converge; raise precision");
}

Evaluation modular_lambda(const HPoint& z, const PrecisionCtx& ctx) {
  ctx.validate();
  if (!(z.y > 0)) throw PreconditionError("lambda needs a point of the upper half-plane");
  ScopedPrecision sp(ctx.bits);
  const Real pi = real_pi();
  Real mag = exp(-pi * z.y);
  ComplexHP nome(mag * cos(pi * z.x), mag * sin(pi * z.x));
  const double log_n = -3.14159265358979323846 * static_cast<double>(z.y);
  const double log_eps = log_eps_for(ctx.bits);
  // Truncate once n^{K(K+1)} drops below eps.
  unsigned K = 1;
  const unsigned cap = std::max(ctx.qterms, 16u);
  while (K < cap && K * (K + 1.0) * log_n >= log_eps) ++K;

  ComplexHP n2 = nome * nome;
  ComplexHP s2(Real(1)), s3(Real(0));
  ComplexHP pow2 = n2, step2 = n2 * n2;  // n^{k(k+1)}, n^{2k+2}
  ComplexHP pow3 = nome, step3 = nome * n2;  // n^{k^2}, n^{2k+1}
  for (unsigned k = 1; k <= K; ++k) {
    s2 += pow2;
    s3 += pow3;
    pow2 *= step2;
    step2 *= n2;
    pow3 *= step3;
    step3 *= n2;
  }
  s3 = ComplexHP(Real(1)) + s3 * Real(2);
  ComplexHP a = s2 * s2, b = s3 * s3;
  Evaluation out;
  out.value = nome * Real(16) * (a * a) / (b * b);
  out.terms = K;
  Real lead = exp(Real(K * (K + 1.0) * log_n));
  out.tail_bound = Real(64) * lead * (1 + out.value.abs()) / (1 - mag);
  check_tail(out.tail_bound, out.value, ctx, "lambda");
  return out;
}

std::optional<Real> period_length(const Geodesic& g) {
  if (!g.is_exact()) return std::nullopt;
  GeodesicMatrix A = matrix_from_geodesic(g);
  BigInt N = A.level();
  if (is_perfect_square(N)) return std::nullopt;
  PellSolution s = pell_min(N);
  return 2 * log(to_real(s.t) + to_real(s.u) * sqrt(to_real(N)));
}

std::pair<Real, Real> resolve_window(const Geodesic& g, const SampleWindow& w) {
  switch (w.kind) {
    case SampleWindow::Kind::Range:
    case SampleWindow::Kind::Arclength:
      return {w.lo, w.hi};
    case SampleWindow::Kind::Standard:
      if (g.is_vertical()) return {Real(-1), Real(1)};
      return {Real(0), real_pi()};
    case SampleWindow::Kind::OnePeriod:
      break;
  }
  bool exact = g.is_exact();
  if (exact) {
    if (auto l = period_length(g)) return {-*l / 2, *l / 2};
    return {Real(-3), Real(3)};
  }
  return {Real(-2), Real(2)};
}

HPoint geodesic_at(const Geodesic& g, const Real& s) {
  Real x0 = g.center();
  if (g.is_vertical()) return {x0, exp(s)};
  Real rho = sqrt(g.radius_squared());
  return {x0 + rho * tanh(s), rho / cosh(s)};
}

ComplexHP geodesic_tangent(const Geodesic& g, const Real& s) {
  if (g.is_vertical()) return {Real(0), exp(s)};
  Real rho = sqrt(g.radius_squared());
  Real sech = 1 / cosh(s);
  return {rho * sech * sech, -rho * sech * tanh(s)};
}

std::vector<HPoint> sample_geodesic(const Geodesic& g, std::size_t n, const SampleWindow& window) {
  require(n >= 1, "sample count must be positive");
  std::vector<HPoint> out;
  out.reserve(n);
  // Inclusive grid on [lo, hi]; a single sample sits at the midpoint.
  auto grid = [&](const Real& lo, const Real& hi, std::size_t k) -> Real {
    if (n == 1) return (lo + hi) / 2;
    return lo + (hi - lo) * Real(k) / Real(n - 1);
  };
  const Real x0 = g.center();
  const bool vertical = g.is_vertical();
  const Real rho = vertical ? Real(0) : Real(sqrt(g.radius_squared()));

  switch (window.kind) {
    case SampleWindow::Kind::Standard:
      for (std::size_t k = 0; k < n; ++k) {
        if (vertical) {
          out.push_back({x0, exp(grid(Real(-1), Real(1), k))});
        } else {
          Real theta = real_pi() * (Real(k) + Real(0.5)) / Real(n);
          out.push_back({x0 + rho * cos(theta), rho * sin(theta)});
        }
      }
      return out;
    case SampleWindow::Kind::Range:
      if (!vertical && !(window.lo > 0 && window.hi < real_pi() && window.lo <= window.hi))
        throw PreconditionError("semicircle angle range must lie inside (0, pi)");
      for (std::size_t k = 0; k < n; ++k) {
        Real t = grid(window.lo, window.hi, k);
        if (vertical)
          out.push_back({x0, exp(t)});
        else
          out.push_back({x0 + rho * cos(t), rho * sin(t)});
      }
      return out;
    case SampleWindow::Kind::Arclength:
    case SampleWindow::Kind::OnePeriod: {
      auto [lo, hi] = resolve_window(g, window);
      for (std::size_t k = 0; k < n; ++k) out.push_back(geodesic_at(g, grid(lo, hi, k)));
      return out;
    }
  }
  return out;
}

}  // namespace specgeo
