#include "specgeo/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <regex>

#include "json.hpp"
#include "specgeo/algcheck.hpp"
#include "specgeo/serialize.hpp"

namespace specgeo {

namespace {

using nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exact rational from "p", "p/q" or a plain decimal like "-1.25".
Rational parse_rational(const std::string& s) {
  static const std::regex frac(R"(^[+-]?\d+(/\d+)?$)");
  static const std::regex decimal(R"(^([+-]?)(\d*)\.(\d+)$)");
  std::smatch m;
  if (std::regex_match(s, frac)) {
    std::string t = s[0] == '+' ? s.substr(1) : s;
    Rational r(t);
    return r;
  }
  if (std::regex_match(s, m, decimal)) {
    std::string digits = m[2].str() + m[3].str();
    BigInt num(digits.empty() ? "0" : digits);
    BigInt den = 1;
    for (auto k = m[3].length(); k > 0; --k) den *= 10;
    Rational r(num, den);
    return m[1] == "-" ? Rational(-r) : r;
  }
  throw UsageError("not a rational number: " + s);
}

Coord parse_coord(const std::string& s) {
  if (s == "pi") return Inexact::pi();
  return parse_rational(s);
}

Real parse_value(const std::string& s) {
  if (s == "pi") return real_pi();
  if (s.find('/') != std::string::npos) return to_real(parse_rational(s));
  try {
    return Real(s);
  } catch (const std::exception&) {
    throw UsageError("not a number: " + s);
  }
}

std::int64_t parse_level(const std::string& s) {
  static const std::regex pos(R"(^\d{1,9}$)");
  if (!std::regex_match(s, pos)) throw UsageError("N must be a positive integer: " + s);
  std::int64_t N = std::stoll(s);
  if (N < 1) throw UsageError("N must be a positive integer: " + s);
  return N;
}

int print_digits(unsigned bits) { return static_cast<int>(bits_to_digits10(bits)) - 10; }

void write_file(const std::filesystem::path& p, const std::string& text) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f || !(f << text) || !f.flush()) throw std::runtime_error("cannot write " + p.string());
}

void require_format(const Config& cfg, std::initializer_list<const char*> allowed) {
  if (cfg.format.empty()) return;
  for (const char* a : allowed)
    if (cfg.format == a) return;
  throw UsageError("--format " + cfg.format + " is not available for this command");
}

ordered_json mat_json(const Mat2Z& m) { return {m.a.str(), m.b.str(), m.c.str(), m.d.str()}; }

ordered_json point_json(const PlanePoint& p, int digits) {
  return {format_real(p.x, digits), format_real(p.y, digits)};
}

// --- classes -------------------------------------------------------------

int cmd_classes(const Config& cfg, const std::string& arg, std::ostream& out) {
  std::int64_t N = parse_level(arg);
  ClassSet cs;
  if (N == 1) {
    cs.N = 1;
    cs.reps = tilde_representatives(1);
    cs.tilde_pairs = {{0, 0}, {1, 1}};
  } else {
    if (is_perfect_square(BigInt(N))) throw UsageError("classes: square N > 1 is not supported");
    cs = enumerate_classes(BigInt(N));
  }
  std::optional<PellSolution> pell;
  if (N > 1) pell = pell_min(BigInt(N));

  if (cfg.format == "json") {
    ordered_json doc = ordered_json::parse(classset_to_json(cs));
    if (pell) {
      doc["pell"] = {pell->t.str(), pell->u.str()};
      ordered_json autos = ordered_json::array();
      for (const auto& A : cs.reps) autos.push_back(mat_json(fundamental_automorph(A)));
      doc["automorphs"] = autos;
    }
    out << doc.dump(1) << "\n";
  } else {
    out << "N = " << N << "\n";
    out << "narrow classes: " << cs.narrow_count() << "\n";
    out << "tilde classes: " << cs.tilde_count() << "\n";
    if (pell) out << "pell: t = " << pell->t << ", u = " << pell->u << "\n";
    for (std::size_t i = 0; i < cs.reps.size(); ++i) {
      out << "class " << i << ": " << to_string(cs.reps[i]);
      if (pell) out << "  automorph " << to_string(fundamental_automorph(cs.reps[i]));
      out << "\n";
    }
    out << "tilde pairs:";
    for (const auto& [i, j] : cs.tilde_pairs) out << " [" << i << "," << j << "]";
    out << "\n";
  }
  if (cfg.out) write_file(*cfg.out / ("classes_" + std::to_string(N) + ".json"), classset_to_json(cs));
  return kExitOk;
}

// --- j, invertj, lambda --------------------------------------------------

void print_complex(const Config& cfg, std::ostream& out, const char* key, const Real& re,
                   const Real& im) {
  int dg = print_digits(cfg.bits);
  if (cfg.format == "json") {
    ordered_json doc;
    doc["precision"] = precision_tag(cfg.bits);
    doc[key] = {format_real(re, dg), format_real(im, dg)};
    out << doc.dump(1) << "\n";
  } else if (cfg.format == "csv") {
    out << "re,im\n" << format_real(re, dg) << ',' << format_real(im, dg) << "\n";
  } else {
    out << format_real(re, dg) << ' ' << format_real(im, dg) << "\n";
  }
}

HPoint upper_point(const std::string& xs, const std::string& ys) {
  Real x = parse_value(xs), y = parse_value(ys);
  if (!(y > 0)) throw UsageError("the point must lie in the upper half-plane (y > 0)");
  return HPoint::make(x, y);
}

int cmd_j(const Config& cfg, const PrecisionCtx& ctx, const std::string& xs, const std::string& ys,
          std::ostream& out) {
  require_format(cfg, {"json", "csv"});
  HPoint z = upper_point(xs, ys);
  auto [re, im] = J(z, ctx);
  print_complex(cfg, out, "j", re, im);
  return kExitOk;
}

int cmd_invertj(const Config& cfg, const PrecisionCtx& ctx, const std::string& xs,
                const std::string& ys, std::ostream& out) {
  require_format(cfg, {"json", "csv"});
  HPoint z = j_invert(ComplexHP(parse_value(xs), parse_value(ys)), ctx);
  print_complex(cfg, out, "z", z.x, z.y);
  return kExitOk;
}

int cmd_lambda(const Config& cfg, const PrecisionCtx& ctx, const std::string& xs,
               const std::string& ys, std::ostream& out) {
  require_format(cfg, {"json", "csv"});
  HPoint z = upper_point(xs, ys);
  ComplexHP l = modular_lambda(z, ctx).value;
  Real lemn = abs(l.norm() * ((l.re - 1) * (l.re - 1) + l.im * l.im) - Real(1) / 16);
  int dg = print_digits(cfg.bits);
  if (cfg.format == "json") {
    ordered_json doc;
    doc["precision"] = precision_tag(cfg.bits);
    doc["lambda"] = {format_real(l.re, dg), format_real(l.im, dg)};
    doc["lemniscate_residual"] = format_real(lemn, 12);
    out << doc.dump(1) << "\n";
  } else if (cfg.format == "csv") {
    out << "re,im,lemniscate_residual\n"
        << format_real(l.re, dg) << ',' << format_real(l.im, dg) << ',' << format_real(lemn, 12) << "\n";
  } else {
    out << format_real(l.re, dg) << ' ' << format_real(l.im, dg) << "\n";
    out << "lemniscate residual " << format_real(lemn, 6) << "\n";
  }
  return kExitOk;
}

// --- zn ------------------------------------------------------------------

std::string verdict_line(const VerificationReport& r) {
  return std::string(r.pass ? "PASS " : "FAIL ") + r.claim + "  residual " +
         format_real(r.max_residual, 4) + "  tol " + format_real(r.tolerance, 4);
}

int cmd_zn(const Config& cfg, const PrecisionCtx& ctx, const std::string& arg, std::ostream& out) {
  std::int64_t N = parse_level(arg);
  if (N > 1 && is_perfect_square(BigInt(N))) throw UsageError("zn: square N > 1 is not supported");
  ScopedPrecision sp(ctx.bits);
  const Real tol = Real(cfg.tol.value_or(1e-10));
  const std::vector<Mat2Z> reps = N == 1 ? tilde_representatives(1) : enumerate_classes(BigInt(N)).reps;
  const std::vector<Mat2Z> tilde = tilde_representatives(N);

  std::vector<VerificationReport> contain;
  for (const auto& A : reps) contain.push_back(verify_containment(N, A, cfg.samples, tol, ctx));
  ZeroScan scan = scan_zero_set(N, GridSpec{}, ctx);
  VerificationReport cover = verify_cover(N, GridSpec{}, ctx, &scan);
  std::vector<VerificationReport> distinct;
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, IntersectionResult>> meets;
  for (std::size_t i = 0; i < tilde.size(); ++i) {
    for (std::size_t k = i + 1; k < tilde.size(); ++k) {
      distinct.push_back(verify_distinct(N, tilde[i], tilde[k], cfg.samples, ctx));
      meets.push_back({{i, k}, find_intersections(tilde[i], tilde[k], cfg.samples, Real(1e-30), ctx)});
    }
  }
  bool pass = cover.pass;
  for (const auto& r : contain) pass = pass && r.pass;
  for (const auto& r : distinct) pass = pass && r.pass;

  std::vector<PlaneSample> curves;
  for (const auto& A : tilde) curves.push_back(geodesic_image(A, cfg.samples, ctx));
  const Chart chart = Chart::for_level(N);

  ordered_json doc;
  doc["N"] = std::to_string(N);
  doc["precision"] = precision_tag(ctx.bits);
  doc["pass"] = pass;
  auto as_json = [&](const VerificationReport& r) { return ordered_json::parse(report_to_json(r, ctx.bits)); };
  doc["containment"] = ordered_json::array();
  for (const auto& r : contain) doc["containment"].push_back(as_json(r));
  doc["cover"] = as_json(cover);
  doc["distinct"] = ordered_json::array();
  for (const auto& r : distinct) doc["distinct"].push_back(as_json(r));
  doc["intersections"] = ordered_json::array();
  for (const auto& [ij, res] : meets) {
    ordered_json e;
    e["a"] = mat_json(tilde[ij.first]);
    e["b"] = mat_json(tilde[ij.second]);
    e["full_overlap"] = res.full_overlap;
    e["points"] = ordered_json::array();
    for (const auto& p : res.points) e["points"].push_back(point_json(p, 20));
    doc["intersections"].push_back(e);
  }
  const std::string report = doc.dump(1) + "\n";

  if (cfg.out) {
    const std::string stem = "zn_" + std::to_string(N);
    emit_curve(curves, PlotFormat::Csv, chart, *cfg.out / (stem + ".csv"));
    emit_curve(curves, PlotFormat::Svg, chart, *cfg.out / (stem + ".svg"));
    write_file(*cfg.out / (stem + ".json"), report);
  }
  if (cfg.format == "json") {
    out << report;
  } else if (cfg.format == "csv") {
    out << render_curves(curves, PlotFormat::Csv, chart);
  } else if (cfg.format == "svg") {
    out << render_curves(curves, PlotFormat::Svg, chart);
  } else {
    out << "N = " << N << ", " << reps.size() << " classes, " << tilde.size() << " images\n";
    for (const auto& r : contain) out << verdict_line(r) << "\n";
    out << verdict_line(cover) << "  (" << cover.detail["zero_points"] << " zero points)\n";
    for (const auto& r : distinct) out << verdict_line(r) << "\n";
    for (const auto& [ij, res] : meets) {
      out << "intersections " << to_string(tilde[ij.first]) << " x " << to_string(tilde[ij.second]) << ":";
      if (res.full_overlap) out << " full overlap";
      for (const auto& p : res.points) out << " (" << format_real(p.x, 12) << ", " << format_real(p.y, 3) << ")";
      out << "\n";
    }
    out << (pass ? "PASS" : "FAIL") << "\n";
  }
  return pass ? kExitOk : kExitVerifyFailed;
}

// --- algtest -------------------------------------------------------------

struct AlgArgs {
  std::vector<std::string> geodesic;
  std::vector<std::string> exp;
  int dmax = 0;
  std::size_t special_points = 0;
};

int cmd_algtest(const Config& cfg, const PrecisionCtx& ctx, const AlgArgs& a, std::ostream& out) {
  require_format(cfg, {"json"});
  ScopedPrecision sp(ctx.bits);
  VerdictOptions opt;
  opt.samples = cfg.samples;
  if (cfg.tol) opt.fit_tol = *cfg.tol;
  if (cfg.seed) opt.seed = cfg.seed;

  ordered_json doc;
  doc["precision"] = precision_tag(ctx.bits);
  std::string text;

  if (!a.exp.empty()) {
    if (!a.geodesic.empty()) throw UsageError("algtest: give a geodesic or --exp, not both");
    if (a.exp.size() != 2) throw UsageError("--exp takes a family (L, S or R) and a parameter t");
    const std::string& fam = a.exp[0];
    Real t = parse_value(a.exp[1]);
    PlaneSample s;
    if (fam == "L") {
      s = exp_line_sample(Real(0), t, Real(1), Real(0), Real(0), Real(1), cfg.samples);
    } else if (fam == "S") {
      s = exp_line_sample(t, Real(0), Real(0), Real(1), Real(-0.5), Real(0.5), cfg.samples);
    } else if (fam == "R") {
      s = exp_line_sample(t, Real(0), Real(1), sqrt(Real(2)), Real(-0.75), Real(0.75), cfg.samples);
    } else {
      throw UsageError("--exp family must be L, S or R");
    }
    s.provenance = "E(" + fam + "_" + a.exp[1] + ")";
    int dmax = a.dmax > 0 ? a.dmax : 6;
    BialgebraicVerdict v = certify_sample(s, dmax, opt, ctx);
    doc["input"] = s.provenance;
    doc["verdict"] = v.label();
    text = s.provenance + ": " + v.label();
    if (v.certified) {
      ContainmentReport c = strong_vs_weak(s, *v.certificate, ctx);
      doc["containment"] = to_string(c.verdict);
      doc["certificate"] = ordered_json::parse(fitreport_to_json(*v.certificate));
      text += ", " + to_string(c.verdict);
      if (auto r2 = circle_squared_radius(*v.certificate, Real(1e-20))) {
        doc["circle_squared_radius"] = format_real(*r2, print_digits(ctx.bits));
        text += ", circle x^2 + y^2 = " + format_real(*r2, 20);
      }
    }
  } else {
    const auto& g = a.geodesic;
    if (g.empty()) throw UsageError("algtest: give 'vertical X0', 'semicircle X0 R' or --exp");
    Geodesic geo = [&] {
      if (g[0] == "vertical" && g.size() == 2) return Geodesic::vertical(parse_coord(g[1]));
      if (g[0] == "semicircle" && g.size() == 3) return Geodesic::semicircle(parse_coord(g[1]), parse_coord(g[2]));
      throw UsageError("algtest: give 'vertical X0' or 'semicircle X0 R'");
    }();
    int dmax = a.dmax > 0 ? a.dmax : 10;
    doc["input"] = to_string(geo);
    if (a.special_points > 0) {
      if (!geo.is_exact()) throw UsageError("--special-points needs an exact special geodesic");
      SpecialPointFit f = special_point_fit(geo, a.special_points, dmax, opt, ctx);
      doc["level"] = std::to_string(f.level);
      doc["verdict"] = f.certified ? "WeaklyBialgebraic(" + std::to_string(f.fit.degree) + ")"
                                   : "NoFitUpTo(" + std::to_string(dmax) + ")";
      doc["matched"] = f.matched;
      doc["coeff_distance"] = format_real(f.coeff_distance, 6);
      doc["zero_residual"] = format_real(f.zero_residual, 6);
      doc["certificate"] = ordered_json::parse(fitreport_to_json(f.fit));
      text = to_string(geo) + ": " + doc["verdict"].get<std::string>() + ", level " + std::to_string(f.level) +
             (f.matched ? ", matches the modular curve" : ", no match");
    } else {
      BialgebraicVerdict v = bialgebraic_verdict(geo, dmax, opt, ctx);
      doc["verdict"] = v.label();
      doc["statistical"] = !v.certified;
      ordered_json res = ordered_json::array();
      for (const auto& r : v.residuals) res.push_back(format_real(r, 6));
      doc["residuals"] = res;
      text = to_string(geo) + ": " + v.label();
      if (v.certified) {
        doc["certificate"] = ordered_json::parse(fitreport_to_json(*v.certificate));
        SpecialVerdict sv = is_special_geodesic(geo);
        if (sv.kind != SpecialVerdict::Kind::NotSpecial && geo.is_exact()) {
          std::int64_t N = static_cast<std::int64_t>(matrix_from_geodesic(geo).level());
          doc["level"] = std::to_string(N);
          if (N <= kExactPhiMax) {
            Real d = certificate_distance(*v.certificate, N);
            doc["phi_distance"] = format_real(d, 6);
            text += ", distance to the level " + std::to_string(N) + " curve " + format_real(d, 3);
          }
        }
      }
    }
  }
  if (cfg.out) write_file(*cfg.out / "algtest.json", doc.dump(1) + "\n");
  if (cfg.format == "json") out << doc.dump(1) << "\n";
  else out << text << "\n";
  return kExitOk;
}

// --- lemniscate ----------------------------------------------------------

int cmd_lemniscate(const Config& cfg, const PrecisionCtx& ctx, std::ostream& out, std::ostream& err) {
  require_format(cfg, {"json", "csv"});
  ScopedPrecision sp(ctx.bits);
  const Real tol = Real(cfg.tol.value_or(1e-12));
  VerificationReport r = lemniscate_check(cfg.samples, tol, ctx);
  if (cfg.format == "json") {
    out << report_to_json(r, ctx.bits);
  } else if (cfg.format == "csv") {
    out << "samples,max_residual,tolerance,pass\n"
        << cfg.samples << ',' << format_real(r.max_residual, 12) << ',' << format_real(r.tolerance, 12) << ','
        << (r.pass ? "true" : "false") << "\n";
  } else {
    out << verdict_line(r) << "\n";
  }
  if (cfg.out) write_file(*cfg.out / "lemniscate.json", report_to_json(r, ctx.bits));
  if (!r.pass) {
    err << "lemniscate: residual above tolerance; retry with --prec " << 2 * ctx.bits << "\n";
    return kExitVerifyFailed;
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Special geodesics, their j-images and modular curves."};
  app.name("specgeo");
  app.require_subcommand(1);
  app.fallthrough();

  Config cfg;
  double tol = 0;
  std::string out_dir, cache_dir;
  app.add_option("--prec", cfg.bits, "working precision in bits (>= 64)")->envname("SPECGEO_PREC")->capture_default_str();
  auto* tol_opt = app.add_option("--tol", tol, "tolerance override")->envname("SPECGEO_TOL");
  app.add_option("--samples", cfg.samples, "sample count")->envname("SPECGEO_SAMPLES")->capture_default_str();
  app.add_option("--out", out_dir, "output directory for artifacts")->envname("SPECGEO_OUT");
  app.add_option("--format", cfg.format, "stdout format")
      ->envname("SPECGEO_FORMAT")
      ->check(CLI::IsMember({"csv", "svg", "json"}));
  app.add_option("--cache", cache_dir, "modular polynomial cache directory")->envname("SPECGEO_CACHE");
  app.add_option("--seed", cfg.seed, "seed for randomized sampling")->envname("SPECGEO_SEED");

  std::string argN, arg1, arg2;
  auto* classes = app.add_subcommand("classes", "SL2(Z) classes of trace-zero matrices of determinant -N");
  classes->add_option("N", argN)->required();
  auto* jcmd = app.add_subcommand("j", "j(x + iy)");
  jcmd->add_option("x", arg1)->required();
  jcmd->add_option("y", arg2)->required();
  auto* inv = app.add_subcommand("invertj", "z in the fundamental domain with j(z) = re + i im");
  inv->add_option("re", arg1)->required();
  inv->add_option("im", arg2)->required();
  auto* lam = app.add_subcommand("lambda", "modular lambda at x + iy");
  lam->add_option("x", arg1)->required();
  lam->add_option("y", arg2)->required();
  auto* zn = app.add_subcommand("zn", "verify the real modular curve of level N");
  zn->add_option("N", argN)->required();
  AlgArgs alg;
  auto* algtest = app.add_subcommand("algtest", "fit algebraic curves to j-images of geodesics");
  algtest->add_option("geodesic", alg.geodesic, "vertical X0 | semicircle X0 R (coordinates p/q, decimals or pi)");
  algtest->add_option("--exp", alg.exp, "exponential family L|S|R and parameter t")->expected(2);
  algtest->add_option("--dmax", alg.dmax, "largest degree tried");
  algtest->add_option("--special-points", alg.special_points, "fit images of this many special points");
  auto* lemn = app.add_subcommand("lemniscate", "lambda image of the geodesic of [[1,1],[1,-1]]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*tol_opt) cfg.tol = tol;
    if (!out_dir.empty()) cfg.out = out_dir;
    if (!cache_dir.empty()) cfg.cache = cache_dir;
    if (cfg.bits < 64) throw UsageError("--prec must be at least 64");
    if (cfg.samples < 2) throw UsageError("--samples must be at least 2");
    if (cfg.tol && !(*cfg.tol > 0)) throw UsageError("--tol must be positive");
    if (cfg.out) {
      std::error_code ec;
      std::filesystem::create_directories(*cfg.out, ec);
      if (ec || !std::filesystem::is_directory(*cfg.out)) throw UsageError("cannot use output directory " + out_dir);
    }
    if (cfg.cache) {
      std::error_code ec;
      std::filesystem::create_directories(*cfg.cache, ec);
      if (ec) throw UsageError("cannot use cache directory " + cache_dir);
    }
    set_phi_cache_dir(cfg.cache);
    PrecisionCtx ctx = PrecisionCtx::with_bits(cfg.bits);
    ScopedPrecision sp(cfg.bits);

    if (*classes) return cmd_classes(cfg, argN, out);
    if (*jcmd) return cmd_j(cfg, ctx, arg1, arg2, out);
    if (*inv) return cmd_invertj(cfg, ctx, arg1, arg2, out);
    if (*lam) return cmd_lambda(cfg, ctx, arg1, arg2, out);
    if (*zn) return cmd_zn(cfg, ctx, argN, out);
    if (*algtest) return cmd_algtest(cfg, ctx, alg, out);
    if (*lemn) return cmd_lemniscate(cfg, ctx, out, err);
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const PrecisionError& e) {
    err << "precision: " << e.what() << "; retry with a larger --prec\n";
    return kExitVerifyFailed;
  } catch (const std::exception& e) {
    err << "failed: " << e.what() << "\n";
    return kExitVerifyFailed;
  }
}

}  // namespace specgeo
