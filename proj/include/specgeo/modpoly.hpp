#pragma once

// Classical modular polynomials Phi_N: evaluation through the isogeny product,
// exact recovery for small N, the real form Phi~_N(X, Y) = Phi_N(X+iY, X-iY),
// and the on-disk coefficient cache.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "specgeo/modfun.hpp"

namespace specgeo {

struct DivisorSystem {
  std::int64_t a, b, d;  // tau -> (a tau + b) / d
  friend bool operator==(const DivisorSystem&, const DivisorSystem&) = default;
};

// a d = N, 0 <= b < d, gcd(a, b, d) = 1.
std::vector<DivisorSystem> divisor_systems(std::int64_t N);
// N prod_{p | N} (1 + 1/p).
std::int64_t psi(std::int64_t N);

using Exponents = std::pair<int, int>;

struct BivarZPoly {
  std::int64_t N = 0;
  std::map<Exponents, BigInt> terms;  // X^i Y^j -> coefficient, no zeros stored

  BigInt coeff(int i, int j) const;
  int degree_x() const;
  int degree_y() const;
  bool symmetric() const;
  ComplexHP eval(const ComplexHP& x, const ComplexHP& y) const;
  // sum |c| |x|^i |y|^j, the natural scale for eval.
  Real magnitude(const ComplexHP& x, const ComplexHP& y) const;
};

struct PhiTilde {
  std::int64_t N = 0;
  std::map<Exponents, BigInt> terms;
  // Phi~_1 = 2iY is not integral; it is stored divided by 2i.
  bool divided_by_2i = false;

  int total_degree() const;
  bool even_in_y() const;
  Real eval(const Real& x, const Real& y) const;
  Real magnitude(const Real& x, const Real& y) const;
};

struct PhiEvalResult {
  ComplexHP value;
  Real normalized;  // |value| / prod (1 + |u| + |j_k|)
  Real scale;       // prod (1 + |u| + |j_k|)
};

// prod over divisor systems of (u - j((a z + b)/d)) with z = j_invert(v).
PhiEvalResult phi_eval(std::int64_t N, const ComplexHP& u, const ComplexHP& v,
                       const PrecisionCtx& ctx);

inline constexpr std::int64_t kExactPhiMax = 5;

struct PhiComputeInfo {
  unsigned bits_used = 0;
  double max_round_distance = 0;
  int retries = 0;
};

// Interpolates Phi_N at nodes tau_k = i (1.1 + 0.05 k), rounds, and verifies
// symmetry and agreement with phi_eval at fresh points. Precision doubles on
// failure, at most max_retries times.
BivarZPoly phi_compute(std::int64_t N, const PrecisionCtx& ctx, PhiComputeInfo* info = nullptr,
                       int max_retries = 4);

PhiTilde phi_tilde(const BivarZPoly& P);

// Cached exact polynomials (N <= kExactPhiMax), consulting the cache
// directory when one is set.
void set_phi_cache_dir(std::optional<std::filesystem::path> dir);
const BivarZPoly& exact_phi(std::int64_t N);
const PhiTilde& exact_phi_tilde(std::int64_t N);

enum class PhiPath { Exact, Proxy };
std::string to_string(PhiPath p);

struct PhiTildeValue {
  Real value;         // exact path: Phi~_N(x, y); proxy path: |phi_eval|
  Real signed_value;  // Phi~_N(x, y) on both paths (real part of the product)
  Real normalized;    // |value| / scale
  PhiPath path = PhiPath::Exact;
};

PhiTildeValue phi_tilde_eval(std::int64_t N, const Real& x, const Real& y,
                             const PrecisionCtx& ctx);

// Repeated evaluation of one level, optionally forcing the proxy path.
class PhiTildeEvaluator {
 public:
  PhiTildeEvaluator(std::int64_t N, PrecisionCtx ctx, bool force_proxy = false);
  PhiTildeValue operator()(const Real& x, const Real& y) const;
  std::int64_t level() const { return N_; }
  PhiPath path() const { return exact_ ? PhiPath::Exact : PhiPath::Proxy; }

 private:
  std::int64_t N_;
  PrecisionCtx ctx_;
  const PhiTilde* exact_ = nullptr;
};

// Cache file phi_N.json with a checksum over the coefficient list.
std::filesystem::path phi_cache_path(const std::filesystem::path& dir, std::int64_t N);
void write_phi_cache(const std::filesystem::path& dir, const BivarZPoly& P);
// Empty when the file is missing, malformed, or fails its checksum.
std::optional<BivarZPoly> read_phi_cache(const std::filesystem::path& dir, std::int64_t N);
std::string phi_to_json(const BivarZPoly& P);
BivarZPoly phi_from_json(const std::string& text);

}  // namespace specgeo
