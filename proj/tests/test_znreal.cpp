#include <filesystem>
#include <fstream>

#include "support.hpp"

using namespace specgeo;

namespace {

double nearest(const std::pair<double, double>& p, const std::vector<std::pair<double, double>>& pts) {
  double best = 1e9;
  for (const auto& q : pts) best = std::min(best, std::hypot(p.first - q.first, p.second - q.second));
  return best;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("chart round trip and range") {
  ScopedPrecision sp(256);
  for (std::int64_t N : {1, 2, 5, 10}) {
    Chart c = Chart::for_level(N);
    double R = std::exp(2 * M_PI * std::sqrt(double(N))) + 3000;
    auto [ru, rv] = c.to_chart(Real(R), Real(0));
    CHECK(std::abs(ru - 1) < 1e-12);
    CHECK(std::abs(rv) < 1e-15);
    for (double x : {-1e6, -3.0, 0.0, 17.5, 1728.0, 4e9}) {
      for (double y : {-2e5, 0.0, 0.5, 9e7}) {
        auto [u, v] = c.to_chart(Real(x), Real(y));
        if (std::hypot(x, y) <= R) CHECK(std::hypot(u, v) <= 1 + 1e-12);
        auto [x2, y2] = c.from_chart(u, v);
        double scale = 1 + std::hypot(x, y);
        CHECK(dbl(abs(x2 - x)) <= 1e-10 * scale);
        CHECK(dbl(abs(y2 - y)) <= 1e-10 * scale);
      }
    }
  }
}

TEST_CASE("tilde representatives") {
  auto r1 = tilde_representatives(1);
  REQUIRE(r1.size() == 2);
  CHECK(r1[0] == M(-1, 0, 0, 1));
  CHECK(r1[1] == M(0, 1, 1, 0));
  CHECK(tilde_representatives(5).size() == 2);
  CHECK(tilde_representatives(2).size() == 1);
  CHECK(provenance_for(M(0, 5, 1, 0)) == "A=[[0,5],[1,0]]");
}

TEST_CASE("containment on exact levels") {
  ScopedPrecision sp(256);
  auto ctx = ctx256();
  for (std::int64_t N : {1, 2, 3, 5}) {
    for (const Mat2Z& A : tilde_representatives(N)) {
      auto r = verify_containment(N, A, 120, Real(1e-10), ctx);
      CAPTURE(N);
      CHECK(r.pass);
      CHECK(dbl(r.max_residual) < 1e-40);
    }
  }
  CHECK_THROWS_AS(verify_containment(5, M(0, 3, 1, 0), 10, Real(1e-10), ctx), PreconditionError);
}

TEST_CASE("N = 1 images split the real axis at 1728") {
  ScopedPrecision sp(256);
  auto ctx = ctx256();
  PlaneSample a = geodesic_image(M(-1, 0, 0, 1), 60, ctx);
  PlaneSample b = geodesic_image(M(0, 1, 1, 0), 60, ctx);
  for (const auto& p : a.points) {
    CHECK(dbl(abs(p.y)) < 1e-50 * (1 + dbl(abs(p.x))));
    CHECK(p.x >= Real(1728) - Real(1e-40));
  }
  for (const auto& p : b.points) {
    CHECK(dbl(abs(p.y)) < 1e-50 * (1 + dbl(abs(p.x))));
    CHECK(p.x <= Real(1728) + Real(1e-40));
  }
}

TEST_CASE("zero scan is symmetric under y -> -y") {
  ScopedPrecision sp(256);
  auto ctx = ctx256();
  GridSpec grid;
  ZeroScan scan = scan_zero_set(2, grid, ctx);
  REQUIRE(scan.chart_points.size() > 50);
  CHECK(scan.path == PhiPath::Exact);
  double worst = 0;
  for (const auto& p : scan.chart_points) worst = std::max(worst, nearest({p.first, -p.second}, scan.chart_points));
  CHECK(worst < 1e-6);
}

TEST_CASE("cover at N = 2 and N = 3") {
  ScopedPrecision sp(256);
  auto ctx = ctx256();
  for (std::int64_t N : {2, 3}) {
    auto r = verify_cover(N, GridSpec{}, ctx);
    CAPTURE(N);
    CHECK(r.pass);
    CHECK(dbl(r.max_residual) <= GridSpec{}.cover_tol());
    CHECK(std::stoul(r.detail.at("zero_points")) > 0);
  }
}

TEST_CASE("distinct classes at N = 5") {
  ScopedPrecision sp(256);
  auto ctx = ctx256();
  Mat2Z A = M(0, 5, 1, 0), B = M(1, 2, 2, -1);
  auto r = verify_distinct(5, A, B, 200, ctx);
  CHECK(r.pass);
  CHECK_FALSE(r.witnesses.empty());
  CHECK_THROWS_AS(verify_distinct(5, A, -A, 50, ctx), PreconditionError);
}

TEST_CASE("N = 5 images meet at j = 1728") {
  ScopedPrecision sp(256);
  auto ctx = ctx256();
  auto r = find_intersections(M(0, 5, 1, 0), M(1, 2, 2, -1), 200, Real(1e-30), ctx);
  CHECK_FALSE(r.full_overlap);
  bool found = false;
  for (const auto& p : r.points) found = found || dbl(abs(p.x - 1728) + abs(p.y)) < 1e-20;
  CHECK(found);
  CHECK(find_intersections(M(0, 5, 1, 0), M(0, -5, -1, 0), 50, Real(1e-30), ctx).full_overlap);
}

TEST_CASE("N = 3 classes share an image") {
  ScopedPrecision sp(256);
  auto ctx = ctx256();
  auto h = image_hausdorff(M(0, 3, 1, 0), M(0, 1, 3, 0), 200, ctx);
  CHECK(h.distance < h.pitch);
}

TEST_CASE("lemniscate") {
  ScopedPrecision sp(256);
  auto ctx = ctx256();
  auto r = lemniscate_check(200, Real(1e-12), ctx);
  CHECK(r.pass);
  CHECK(dbl(r.max_residual) < 1e-60);
  // A nearby circle misses the curve.
  auto off = lemniscate_check_on(Geodesic::semicircle(Q(1), Q(201, 100)),
                                 SampleWindow::arclength(Real(-1), Real(1)), 100, Real(1e-12), ctx);
  CHECK_FALSE(off.pass);
  CHECK(dbl(off.max_residual) > 1e-4);
}

TEST_CASE("plot output") {
  ScopedPrecision sp(256);
  auto ctx = ctx256();
  Chart chart = Chart::for_level(5);
  CHECK_THROWS_AS(render_curves({}, PlotFormat::Csv, chart), PreconditionError);
  CHECK_THROWS_AS(render_curves({PlaneSample{}}, PlotFormat::Svg, chart), PreconditionError);

  std::vector<PlaneSample> s{geodesic_image(M(0, 5, 1, 0), 40, ctx), geodesic_image(M(1, 2, 2, -1), 40, ctx)};
  std::string csv = render_curves(s, PlotFormat::Csv, chart);
  CHECK(csv.rfind("x,y,provenance\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 81);
  CHECK(csv.find("\"A=[[0,5],[1,0]]\"") != std::string::npos);
  std::string svg = render_curves(s, PlotFormat::Svg, chart);
  CHECK(svg.find("#1f4fd1") != std::string::npos);
  CHECK(svg.find("#d62728") != std::string::npos);
  CHECK(svg.find("class-1") != std::string::npos);

  auto dir = std::filesystem::temp_directory_path() / "specgeo_test_plot";
  std::filesystem::remove_all(dir);
  emit_curve(s, PlotFormat::Csv, chart, dir / "a.csv");
  std::vector<PlaneSample> again{geodesic_image(M(0, 5, 1, 0), 40, ctx), geodesic_image(M(1, 2, 2, -1), 40, ctx)};
  emit_curve(again, PlotFormat::Csv, chart, dir / "b.csv");
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
  CHECK(slurp(dir / "a.csv") == csv);
  CHECK_THROWS_AS(emit_curve({}, PlotFormat::Svg, chart, dir / "c.svg"), PreconditionError);
  CHECK_FALSE(std::filesystem::exists(dir / "c.svg"));
  std::filesystem::remove_all(dir);
}
