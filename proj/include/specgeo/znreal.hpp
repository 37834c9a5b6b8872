#pragma once

// The real curves Z_N(R) = {Phi~_N = 0}: geodesic images under J, and the
// sample-based checks of containment, cover, distinctness, intersections and
// the lambda lemniscate.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "specgeo/modpoly.hpp"
#include "specgeo/quadclass.hpp"

namespace specgeo {

struct PlanePoint {
  Real x, y;
};

struct PlaneSample {
  enum class Kind { Curve, Scatter };  // Curve samples are ordered along a path
  std::vector<PlanePoint> points;
  std::string provenance;
  Kind kind = Kind::Curve;
};

struct VerificationReport {
  std::string claim;
  Real max_residual{0};
  Real tolerance{0};
  bool pass = false;
  std::vector<PlanePoint> witnesses;
  std::map<std::string, std::string> detail;  // knobs and counts, for the record
};

// Compressive radial chart: w -> (w/|w|) log(1 + |w|) / log(1 + R_N) with
// R_N = e^{2 pi sqrt N} + 3000, which maps Z_N(R) into the unit disk.
struct Chart {
  double log_scale = 1;

  static Chart for_level(std::int64_t N);
  std::pair<double, double> to_chart(const Real& x, const Real& y) const;
  std::pair<Real, Real> from_chart(double u, double v) const;
};

struct GridSpec {
  double lo = -1.02, hi = 1.02;  // square window in chart coordinates
  double pitch = 0.02;
  double detect_tol = 1e-9;      // chart-space width of refined sign changes
  double cover_factor = 3.0;     // cover tolerance = cover_factor * pitch
  double cover_tol() const { return cover_factor * pitch; }
};

std::string provenance_for(const Mat2Z& A);

// J over one automorph period (non-square N) or the arclength window [-3, 3]
// (square N).
PlaneSample geodesic_image(const Mat2Z& A, std::size_t n, const PrecisionCtx& ctx);

// Ordered chart-space polyline of J(C_A), refined until consecutive points are
// at most max_step apart. Parameters s are the arclength positions.
struct ImagePolyline {
  std::vector<std::pair<double, double>> chart;
  std::vector<Real> s;
  Mat2Z A;
};
ImagePolyline image_polyline(const Mat2Z& A, const Chart& chart, double max_step,
                             const PrecisionCtx& ctx);

double distance_to_polyline(const std::pair<double, double>& p, const ImagePolyline& poly);

// One representative per +-class: A^1_1, A^1_2 for N = 1, otherwise the first
// member of each cell of enumerate_classes(N).tilde_pairs.
std::vector<Mat2Z> tilde_representatives(std::int64_t N);

VerificationReport verify_containment(std::int64_t N, const Mat2Z& A, std::size_t n,
                                      const Real& tol, const PrecisionCtx& ctx);

struct ZeroScan {
  PlaneSample zeros;  // raw (x, y) of refined sign changes
  std::vector<std::pair<double, double>> chart_points;
  std::size_t grid_points = 0;
  PhiPath path = PhiPath::Exact;
};

// Sign changes of Phi~_N along grid rows and columns, refined by bracketing.
ZeroScan scan_zero_set(std::int64_t N, const GridSpec& grid, const PrecisionCtx& ctx,
                       bool force_proxy = false);

VerificationReport verify_cover(std::int64_t N, const GridSpec& grid, const PrecisionCtx& ctx,
                                const ZeroScan* scan = nullptr);

// One-sided witness: a point of J(C_A) farther than `separation` (chart units)
// from J(C_B).
VerificationReport verify_distinct(std::int64_t N, const Mat2Z& A, const Mat2Z& B, std::size_t n,
                                   const PrecisionCtx& ctx, double separation = 0.06);

struct IntersectionResult {
  std::vector<PlanePoint> points;
  bool full_overlap = false;  // A is conjugate to +-B: the images coincide
  std::size_t candidates = 0;
};

// Near pairs of the two image polylines, refined by damped Newton on
// (s, t) -> J(z_A(s)) - J(z_B(t)), then clustered.
IntersectionResult find_intersections(const Mat2Z& A, const Mat2Z& B, std::size_t n,
                                      const Real& tol, const PrecisionCtx& ctx);

// Two-sided distance between sample points of each image and the dense
// polyline of the other, in chart units; `pitch` is the largest chart gap
// between consecutive points of the two n-point samples.
struct HausdorffResult {
  double distance = 0;
  double pitch = 0;
};
HausdorffResult image_hausdorff(const Mat2Z& A, const Mat2Z& B, std::size_t n,
                                const PrecisionCtx& ctx);

// lambda over one period of C_{[[1,1],[1,-1]]} against
// (x^2 + y^2)((x - 1)^2 + y^2) = 1/16.
VerificationReport lemniscate_check(std::size_t n, const Real& tol, const PrecisionCtx& ctx);
VerificationReport lemniscate_check_on(const Geodesic& g, const SampleWindow& window,
                                       std::size_t n, const Real& tol, const PrecisionCtx& ctx);

enum class PlotFormat { Csv, Svg };

// CSV: x,y,provenance with raw coordinates. SVG: chart coordinates, one group
// per provenance, class 0 blue and class 1 red.
std::string render_curves(const std::vector<PlaneSample>& samples, PlotFormat format,
                          const Chart& chart);
void emit_curve(const std::vector<PlaneSample>& samples, PlotFormat format, const Chart& chart,
                const std::filesystem::path& file);

}  // namespace specgeo
