#pragma once

// High-precision j and lambda, reduction to the standard fundamental domain,
// inversion of j, and sampling of geodesics.

#include <optional>
#include <utility>
#include <vector>

#include "specgeo/halfplane.hpp"

namespace specgeo {

struct PrecisionCtx {
  unsigned bits = 256;
  unsigned qterms = 64;     // cap on q-expansion terms
  double newton_tol = 0;    // relative tolerance for inversion and tail checks

  // qterms = max(64, bits/7 + 8), newton_tol = 2^-(bits - bits/8).
  static PrecisionCtx with_bits(unsigned bits);
  void validate() const;
};

struct Evaluation {
  ComplexHP value;
  Real tail_bound;  // absolute bound on the truncated series tail
  unsigned terms = 0;
};

// z0 = M z with |Re z0| <= 1/2 and |z0| >= 1, M in SL2(Z).
std::pair<HPoint, Mat2Z> reduce_to_fund_domain(const HPoint& z);

// Throws PrecisionError when tail_bound / (1 + |j|) exceeds ctx.newton_tol.
Evaluation j_invariant(const HPoint& z, const PrecisionCtx& ctx);
std::pair<Real, Real> J(const HPoint& z, const PrecisionCtx& ctx);

struct JDerivative {
  ComplexHP j;
  ComplexHP dj;  // dj/dz at the input point (not at its reduction)
};
JDerivative j_with_derivative(const HPoint& z, const PrecisionCtx& ctx);

// z in the closed fundamental domain with |j(z) - w| <= newton_tol (1 + |w|).
// Boundary ties resolve to Re z >= 0. Throws ConvergenceError on failure.
HPoint j_invert(const ComplexHP& w, const PrecisionCtx& ctx);

// theta2^4 / theta3^4 with nome e^{i pi z}; no reduction is applied.
Evaluation modular_lambda(const HPoint& z, const PrecisionCtx& ctx);

struct SampleWindow {
  enum class Kind {
    Standard,   // theta midpoints in (0, pi); vertical log-height in [-1, 1]
    Range,      // endpoints included: theta for semicircles, log-height for lines
    Arclength,  // endpoints included: hyperbolic arclength from the apex
    OnePeriod,  // arclength over one automorph period, centred at the apex
  };
  Kind kind = Kind::Standard;
  Real lo{0}, hi{0};

  static SampleWindow standard() { return {}; }
  static SampleWindow range(Real lo, Real hi) { return {Kind::Range, std::move(lo), std::move(hi)}; }
  static SampleWindow arclength(Real lo, Real hi) {
    return {Kind::Arclength, std::move(lo), std::move(hi)};
  }
  static SampleWindow one_period() { return {Kind::OnePeriod, Real(0), Real(0)}; }
};

// Arclength of one period of the automorph: 2 log(t + u sqrt N). Empty for
// square N or inexact data.
std::optional<Real> period_length(const Geodesic& g);

// The arclength window a one-period request resolves to: +-l/2 for non-square
// N, [-3, 3] for square N, [-2, 2] for non-special geodesics.
std::pair<Real, Real> resolve_window(const Geodesic& g, const SampleWindow& w);

// Point at arclength s from the apex (vertical: x0 + i e^s) and its tangent.
HPoint geodesic_at(const Geodesic& g, const Real& s);
ComplexHP geodesic_tangent(const Geodesic& g, const Real& s);

std::vector<HPoint> sample_geodesic(const Geodesic& g, std::size_t n,
                                    const SampleWindow& window = SampleWindow::standard());

}  // namespace specgeo
