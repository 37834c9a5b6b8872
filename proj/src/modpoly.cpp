#include "specgeo/modpoly.hpp"

#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

#include <mutex>
#include <numeric>
#include <random>

namespace specgeo {

std::vector<DivisorSystem> divisor_systems(std::int64_t N) {
  require(N >= 1, "divisor_systems needs N >= 1");
  std::vector<DivisorSystem> out;
  for (std::int64_t a = 1; a <= N; ++a) {
    if (N % a != 0) continue;
    std::int64_t d = N / a;
    for (std::int64_t b = 0; b < d; ++b) {
      if (std::gcd(std::gcd(a, b), d) == 1) out.push_back({a, b, d});
    }
  }
  return out;
}

std::int64_t psi(std::int64_t N) {
  require(N >= 1, "psi needs N >= 1");
  std::int64_t num = N, m = N;
  for (std::int64_t p = 2; p * p <= m; ++p) {
    if (m % p != 0) continue;
    while (m % p == 0) m /= p;
    num = num / p * (p + 1);
  }
  if (m > 1) num = num / m * (m + 1);
  return num;
}

BigInt BivarZPoly::coeff(int i, int j) const {
  auto it = terms.find({i, j});
  return it == terms.end() ? BigInt(0) : it->second;
}

int BivarZPoly::degree_x() const {
  int d = -1;
  for (const auto& [e, c] : terms) d = std::max(d, e.first);
  return d;
}

int BivarZPoly::degree_y() const {
  int d = -1;
  for (const auto& [e, c] : terms) d = std::max(d, e.second);
  return d;
}

bool BivarZPoly::symmetric() const {
  for (const auto& [e, c] : terms) {
    if (coeff(e.second, e.first) != c) return false;
  }
  return true;
}

namespace {
template <class V>
std::vector<V> powers(const V& x, int n) {
  std::vector<V> p;
  p.reserve(n + 1);
  p.push_back(V(Real(1)));
  for (int k = 1; k <= n; ++k) p.push_back(p.back() * x);
  return p;
}
}  // namespace

ComplexHP BivarZPoly::eval(const ComplexHP& x, const ComplexHP& y) const {
  auto px = powers(x, std::max(degree_x(), 0));
  auto py = powers(y, std::max(degree_y(), 0));
  ComplexHP acc(Real(0));
  for (const auto& [e, c] : terms) acc += px[e.first] * py[e.second] * to_real(c);
  return acc;
}

Real BivarZPoly::magnitude(const ComplexHP& x, const ComplexHP& y) const {
  auto px = powers(x.abs(), std::max(degree_x(), 0));
  auto py = powers(y.abs(), std::max(degree_y(), 0));
  Real acc = 0;
  for (const auto& [e, c] : terms) acc += px[e.first] * py[e.second] * abs(to_real(c));
  return acc;
}

int PhiTilde::total_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms) d = std::max(d, e.first + e.second);
  return d;
}

bool PhiTilde::even_in_y() const {
  for (const auto& [e, c] : terms) {
    if (e.second % 2 != 0) return false;
  }
  return true;
}

Real PhiTilde::eval(const Real& x, const Real& y) const {
  int dx = 0, dy = 0;
  for (const auto& [e, c] : terms) {
    dx = std::max(dx, e.first);
    dy = std::max(dy, e.second);
  }
  auto px = powers(x, dx);
  auto py = powers(y, dy);
  Real acc = 0;
  for (const auto& [e, c] : terms) acc += px[e.first] * py[e.second] * to_real(c);
  return acc;
}

Real PhiTilde::magnitude(const Real& x, const Real& y) const {
  int dx = 0, dy = 0;
  for (const auto& [e, c] : terms) {
    dx = std::max(dx, e.first);
    dy = std::max(dy, e.second);
  }
  auto px = powers(Real(abs(x)), dx);
  auto py = powers(Real(abs(y)), dy);
  Real acc = 0;
  for (const auto& [e, c] : terms) acc += px[e.first] * py[e.second] * abs(to_real(c));
  return acc;
}

PhiEvalResult phi_eval(std::int64_t N, const ComplexHP& u, const ComplexHP& v,
                       const PrecisionCtx& ctx) {
  require(N >= 1, "phi_eval needs N >= 1");
  ScopedPrecision sp(ctx.bits);
  HPoint z = j_invert(v, ctx);
  ComplexHP uu(Real(u.re), Real(u.im));
  Real uabs = uu.abs();
  PhiEvalResult out{ComplexHP(Real(1)), Real(0), Real(1)};
  for (const auto& s : divisor_systems(N)) {
    HPoint w{(Real(s.a) * z.x + Real(s.b)) / Real(s.d), Real(s.a) * z.y / Real(s.d)};
    ComplexHP r = j_invariant(w, ctx).value;
    out.value *= uu - r;
    out.scale *= 1 + uabs + r.abs();
  }
  out.normalized = out.value.abs() / out.scale;
  return out;
}

namespace {

using MatR = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using VecR = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

BigInt round_to_int(const Real& v) {
  BigInt out;
  mpfr_get_z(out.backend().data(), v.backend().data(), MPFR_RNDN);
  return out;
}

struct Attempt {
  BivarZPoly poly;
  double max_round_distance = 0;
  bool ok = false;
  std::string why;
};

Attempt try_compute(std::int64_t N, unsigned bits) {
  PrecisionCtx ctx = PrecisionCtx::with_bits(bits);
  ScopedPrecision sp(bits);
  const int deg = static_cast<int>(psi(N));
  const auto systems = divisor_systems(N);
  const int nodes = deg + 1;

  MatR V(nodes, nodes);
  MatR A(nodes, deg + 1);  // A(k, i): coefficient of X^i at node k
  for (int k = 0; k < nodes; ++k) {
    HPoint tau{Real(0), Real(11) / 10 + Real(k) / 20};
    Real Y = j_invariant(tau, ctx).value.re;
    Real yp = 1;
    for (int j = 0; j <= deg; ++j) {
      V(k, j) = yp;
      yp *= Y;
    }
    std::vector<ComplexHP> poly{ComplexHP(Real(1))};
    for (const auto& s : systems) {
      HPoint w{Real(s.b) / Real(s.d), Real(s.a) * tau.y / Real(s.d)};
      ComplexHP r = j_invariant(w, ctx).value;
      // poly *= (X - r)
      poly.push_back(ComplexHP(Real(0)));
      for (std::size_t i = poly.size() - 1; i > 0; --i) poly[i] = poly[i - 1] - poly[i] * r;
      poly[0] = -poly[0] * r;
    }
    for (int i = 0; i <= deg; ++i) A(k, i) = poly[i].re;
  }

  Attempt at;
  at.poly.N = N;
  Eigen::FullPivLU<MatR> lu(V);
  Real worst = 0;
  for (int i = 0; i <= deg; ++i) {
    VecR c = lu.solve(A.col(i));
    for (int j = 0; j <= deg; ++j) {
      BigInt r = round_to_int(c(j));
      Real dist = abs(c(j) - to_real(r));
      if (dist > worst) worst = dist;
      if (r != 0) at.poly.terms[{i, j}] = r;
    }
  }
  at.max_round_distance = static_cast<double>(worst);
  if (!(worst < Real(0.01))) {
    at.why = "rounding distance " + format_real(worst, 3);
    return at;
  }
  if (at.poly.coeff(deg, 0) != 1 || at.poly.degree_x() != deg) {
    at.why = "leading coefficient mismatch";
    return at;
  }
  if (N > 1 && !at.poly.symmetric()) {
    at.why = "symmetry check failed";
    return at;
  }
  // Agreement with the product formula at fresh points.
  std::mt19937_64 rng(0x5eedu + static_cast<std::uint64_t>(N));
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int t = 0; t < 5; ++t) {
    ComplexHP u(Real(1500 * unit(rng)), Real(1500 * unit(rng)));
    ComplexHP v(Real(1500 * unit(rng)), Real(1500 * unit(rng)));
    PhiEvalResult pe = phi_eval(N, u, v, ctx);
    ComplexHP pv = at.poly.eval(u, v);
    Real gap = (pv - pe.value).abs() / (at.poly.magnitude(u, v) + pe.scale);
    if (gap > Real(std::ldexp(1.0, -static_cast<int>(bits / 2)))) {
      at.why = "disagreement with product formula";
      return at;
    }
  }
  at.ok = true;
  return at;
}

}  // namespace

BivarZPoly phi_compute(std::int64_t N, const PrecisionCtx& ctx, PhiComputeInfo* info,
                       int max_retries) {
  require(N >= 1, "phi_compute needs N >= 1");
  if (N > kExactPhiMax) throw PreconditionError("phi_compute supports N <= 5 only");
  ctx.validate();
  unsigned bits = ctx.bits;
  std::string last;
  for (int attempt = 0; attempt <= max_retries; ++attempt, bits *= 2) {
    Attempt at = try_compute(N, bits);
    if (info) {
      info->bits_used = bits;
      info->max_round_distance = at.max_round_distance;
      info->retries = attempt;
    }
    if (at.ok) return at.poly;
    last = at.why;
  }
  throw PrecisionError("phi_compute failed (" + last + "); precision escalation exhausted");
}

PhiTilde phi_tilde(const BivarZPoly& P) {
  if (P.N > 1 && !P.symmetric()) throw PreconditionError("phi_tilde needs a symmetric polynomial");
  int maxdeg = std::max(P.degree_x(), P.degree_y());
  // Binomial table.
  std::vector<std::vector<BigInt>> binom(maxdeg + 1);
  for (int n = 0; n <= maxdeg; ++n) {
    binom[n].assign(n + 1, BigInt(1));
    for (int k = 1; k < n; ++k) binom[n][k] = binom[n - 1][k - 1] + binom[n - 1][k];
  }
  std::map<Exponents, BigInt> re, im;
  for (const auto& [e, c] : P.terms) {
    auto [i, j] = e;
    // (X + iY)^i (X - iY)^j
    for (int s = 0; s <= i; ++s) {
      for (int t = 0; t <= j; ++t) {
        BigInt m = c * binom[i][s] * binom[j][t];
        if (t % 2) m = -m;  // (-i)^t = (-1)^t i^t
        Exponents key{i + j - s - t, s + t};
        switch ((s + t) % 4) {
          case 0: re[key] += m; break;
          case 1: im[key] += m; break;
          case 2: re[key] -= m; break;
          case 3: im[key] -= m; break;
        }
      }
    }
  }
  auto prune = [](std::map<Exponents, BigInt>& m) {
    for (auto it = m.begin(); it != m.end();) it = it->second == 0 ? m.erase(it) : std::next(it);
  };
  prune(re);
  prune(im);
  PhiTilde out;
  out.N = P.N;
  if (P.N == 1) {
    if (!re.empty()) throw ConvergenceError("phi_tilde: real part of Phi~_1 did not cancel");
    for (auto& [e, c] : im) {
      if (c % 2 != 0) throw ConvergenceError("phi_tilde: Phi~_1 not divisible by 2i");
      out.terms[e] = c / 2;
    }
    out.divided_by_2i = true;
    return out;
  }
  if (!im.empty()) throw ConvergenceError("phi_tilde: imaginary parts did not cancel");
  out.terms = std::move(re);
  if (!out.even_in_y()) throw ConvergenceError("phi_tilde: odd power of Y survived");
  return out;
}

namespace {
struct Registry {
  std::mutex mu;
  std::optional<std::filesystem::path> dir;
  std::map<std::int64_t, BivarZPoly> phi;
  std::map<std::int64_t, PhiTilde> tilde;
};
Registry& registry() {
  static Registry r;
  return r;
}

const BivarZPoly& exact_phi_locked(Registry& r, std::int64_t N) {
  auto it = r.phi.find(N);
  if (it != r.phi.end()) return it->second;
  std::optional<BivarZPoly> p;
  if (r.dir) p = read_phi_cache(*r.dir, N);
  if (!p) {
    p = phi_compute(N, PrecisionCtx::with_bits(256));
    if (r.dir) write_phi_cache(*r.dir, *p);
  }
  return r.phi.emplace(N, std::move(*p)).first->second;
}
}  // namespace

void set_phi_cache_dir(std::optional<std::filesystem::path> dir) {
  Registry& r = registry();
  std::lock_guard<std::mutex> lock(r.mu);
  r.dir = std::move(dir);
}

const BivarZPoly& exact_phi(std::int64_t N) {
  require(N >= 1 && N <= kExactPhiMax, "exact Phi_N is available for 1 <= N <= 5");
  Registry& r = registry();
  std::lock_guard<std::mutex> lock(r.mu);
  return exact_phi_locked(r, N);
}

const PhiTilde& exact_phi_tilde(std::int64_t N) {
  require(N >= 1 && N <= kExactPhiMax, "exact Phi~_N is available for 1 <= N <= 5");
  Registry& r = registry();
  std::lock_guard<std::mutex> lock(r.mu);
  auto it = r.tilde.find(N);
  if (it != r.tilde.end()) return it->second;
  return r.tilde.emplace(N, phi_tilde(exact_phi_locked(r, N))).first->second;
}

std::string to_string(PhiPath p) { return p == PhiPath::Exact ? "exact" : "proxy"; }

PhiTildeEvaluator::PhiTildeEvaluator(std::int64_t N, PrecisionCtx ctx, bool force_proxy)
    : N_(N), ctx_(ctx) {
  require(N >= 1, "level must be positive");
  ctx_.validate();
  // The product for N = 1 is u - v = 2iy, whose real part carries nothing.
  if (N <= kExactPhiMax && (!force_proxy || N == 1)) exact_ = &exact_phi_tilde(N);
}

PhiTildeValue PhiTildeEvaluator::operator()(const Real& x, const Real& y) const {
  ScopedPrecision sp(ctx_.bits);
  PhiTildeValue out;
  if (exact_) {
    out.path = PhiPath::Exact;
    out.value = exact_->eval(x, y);
    out.signed_value = out.value;
    out.normalized = abs(out.value) / (1 + exact_->magnitude(x, y));
    return out;
  }
  out.path = PhiPath::Proxy;
  ComplexHP u(x, y), v(x, -y);
  PhiEvalResult r = phi_eval(N_, u, v, ctx_);
  out.value = r.value.abs();
  out.signed_value = r.value.re;
  out.normalized = r.normalized;
  return out;
}

PhiTildeValue phi_tilde_eval(std::int64_t N, const Real& x, const Real& y,
                             const PrecisionCtx& ctx) {
  return PhiTildeEvaluator(N, ctx)(x, y);
}

}  // namespace specgeo
