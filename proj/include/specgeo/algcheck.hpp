#pragma once

// Numerical implicitization: monomial least-squares fits to sampled images,
// fit-based bialgebraicity verdicts, strong versus weak containment, and the
// exponential-map desk checks.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "specgeo/znreal.hpp"

namespace specgeo {

// x' = (x - cx) / scale, y' = (y - cy) / scale maps the sample box into [-1, 1]^2.
struct AffineNormalization {
  Real cx{0}, cy{0}, scale{1};

  static AffineNormalization fit_box(const std::vector<PlanePoint>& pts);
  PlanePoint apply(const PlanePoint& p) const;
};

// Total degree first, then descending x exponent: 1, x, y, x^2, xy, y^2, ...
std::vector<Exponents> monomials(int d);

struct FitReport {
  int degree = 0;
  std::vector<Exponents> monomials;
  Real sigma_min{0};
  Real residual{0};          // sigma_min / sqrt(samples)
  std::vector<Real> coeffs;  // unit norm, in normalized coordinates
  Real gap_ratio{0};         // sigma_min / second smallest singular value
  AffineNormalization normalization;
  std::size_t samples = 0;
  unsigned bits = 0;

  std::size_t monomial_count() const { return monomials.size(); }
  // Certificate value at a raw point.
  Real eval(const Real& x, const Real& y) const;
  // Back-substituted coefficients in raw coordinates.
  std::map<Exponents, Real> original_coefficients() const;
};

// Throws PreconditionError when |s| < 2 * monomial count or d < 1.
FitReport fit_algebraic(const PlaneSample& s, int d, const PrecisionCtx& ctx);
FitReport fit_algebraic(const PlaneSample& s, int d, const PrecisionCtx& ctx,
                        const AffineNormalization& norm);

// ||M c|| / sqrt(n) of the certificate on other samples, in the report's
// normalized coordinates.
Real certificate_residual(const FitReport& cert, const PlaneSample& s);

struct VerdictOptions {
  std::size_t samples = 500;
  double fit_tol = 1e-10;  // residual threshold
  double gap_tol = 1e-6;   // residual(d) / residual(d - 1) threshold
  std::optional<std::uint64_t> seed;  // random arclength positions when set
};

struct BialgebraicVerdict {
  bool certified = false;
  int dmax = 0;
  std::optional<FitReport> certificate;
  std::vector<Real> residuals;  // per degree tried, starting at d = 1
  bool statistical = true;      // a failed fit is evidence, not proof

  std::string label() const;  // WeaklyBialgebraic(d) or NoFitUpTo(dmax)
};

// Sample J over g: one period when g is special, arclength [-2, 2] otherwise.
PlaneSample geodesic_j_sample(const Geodesic& g, std::size_t n, const PrecisionCtx& ctx,
                              std::optional<std::uint64_t> seed = std::nullopt);

// d = 1..dmax, first fit with residual < fit_tol and a decisive drop from d - 1.
BialgebraicVerdict certify_sample(const PlaneSample& s, int dmax, const VerdictOptions& opt,
                                  const PrecisionCtx& ctx);
BialgebraicVerdict bialgebraic_verdict(const Geodesic& g, int dmax, const VerdictOptions& opt,
                                       const PrecisionCtx& ctx);

enum class Containment { Strong, WeakOnly };
std::string to_string(Containment c);

struct ContainmentReport {
  Containment verdict = Containment::WeakOnly;
  double max_distance = 0;  // normalized units
  double cover_tol = 0;
  std::size_t zero_points = 0;
};

// Real zeros of cert on scanlines of the box 1.5x around the sample, in raw
// coordinates, refined to full precision.
std::vector<PlanePoint> certificate_zeros(const FitReport& cert, double box_factor,
                                          int lines, const PrecisionCtx& ctx);

// Strong iff every zero of the certificate in the 1.5x box lies within
// cover_tol (normalized units) of the sample path.
ContainmentReport strong_vs_weak(const PlaneSample& s, const FitReport& cert,
                                 const PrecisionCtx& ctx, double cover_tol = 0.1);

// Unit-norm distance between cert and Phi~_N expressed in the same normalized
// monomial basis; infinity when the degrees differ. Needs N <= kExactPhiMax.
Real certificate_distance(const FitReport& cert, std::int64_t N);

// max normalized phi_tilde_eval over up to `count` certificate zeros inside
// the sampled box.
Real zero_set_agreement(const FitReport& cert, std::int64_t N, std::size_t count,
                        const PrecisionCtx& ctx);

// (e^{-2 pi y} cos 2 pi x, e^{-2 pi y} sin 2 pi x)
std::pair<Real, Real> exp_map(const Real& x, const Real& y);
// E of (x0 + s dx, y0 + s dy) for s = lo + (hi - lo) k / n, k < n.
PlaneSample exp_line_sample(const Real& x0, const Real& y0, const Real& dx, const Real& dy,
                            const Real& lo, const Real& hi, std::size_t n);
// E(k / count, 0), the count-th roots of unity.
std::vector<PlanePoint> exp_special_points(std::size_t count);

// r^2 of a certificate a (x^2 + y^2) + c, when it has that shape.
std::optional<Real> circle_squared_radius(const FitReport& cert, const Real& rel_tol);

struct SpecialPointFit {
  FitReport fit;
  bool certified = false;
  std::int64_t level = 0;     // |det matrix_from_geodesic(g)|
  bool matched = false;
  Real coeff_distance{0};     // against Phi~_N when N <= kExactPhiMax
  Real zero_residual{0};      // phi_tilde_eval on certificate zeros
};

SpecialPointFit special_point_fit(const Geodesic& g, std::size_t m, int dmax,
                                  const VerdictOptions& opt, const PrecisionCtx& ctx);

}  // namespace specgeo
