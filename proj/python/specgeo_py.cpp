#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "specgeo/algcheck.hpp"
#include "specgeo/cli.hpp"
#include "specgeo/serialize.hpp"

namespace py = pybind11;
using namespace specgeo;

namespace {

unsigned digits_for(unsigned bits) { return bits_to_digits10(bits); }

// Python numbers and decimal strings both become Real; str() keeps full
// precision for Fraction and Decimal inputs.
Real to_real_arg(const py::handle& v) {
  if (py::isinstance<py::float_>(v)) return Real(v.cast<double>());
  std::string s = py::str(v);
  if (s.find('/') != std::string::npos) return to_real(Rational(s));
  return parse_real(s);
}

Rational to_rational_arg(const py::handle& v) {
  if (py::isinstance<py::float_>(v)) throw py::type_error("exact input expected: int, Fraction or str");
  return Rational(std::string(py::str(v)));
}

py::tuple complex_out(const ComplexHP& z, unsigned bits) {
  return py::make_tuple(format_real(z.re, digits_for(bits)), format_real(z.im, digits_for(bits)));
}

py::object json_loads(const std::string& text) { return py::module_::import("json").attr("loads")(text); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "High-precision j-map, class sets and fit-based bialgebraicity checks.";
  py::register_exception<PrecisionError>(m, "PrecisionError");
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);

  m.def(
      "j",
      [](const py::object& x, const py::object& y, unsigned bits) {
        ScopedPrecision sp(bits);
        auto ctx = PrecisionCtx::with_bits(bits);
        return complex_out(j_invariant(HPoint::make(to_real_arg(x), to_real_arg(y)), ctx).value, bits);
      },
      py::arg("x"), py::arg("y"), py::arg("bits") = 256,
      "j(x + iy) as a pair of decimal strings (re, im).");

  m.def(
      "invert_j",
      [](const py::object& re, const py::object& im, unsigned bits) {
        ScopedPrecision sp(bits);
        auto ctx = PrecisionCtx::with_bits(bits);
        HPoint z = j_invert(ComplexHP(to_real_arg(re), to_real_arg(im)), ctx);
        return py::make_tuple(format_real(z.x, digits_for(bits)), format_real(z.y, digits_for(bits)));
      },
      py::arg("re"), py::arg("im"), py::arg("bits") = 256,
      "Point (x, y) of the fundamental domain with j(x + iy) = re + i im.");

  m.def(
      "modular_lambda",
      [](const py::object& x, const py::object& y, unsigned bits) {
        ScopedPrecision sp(bits);
        auto ctx = PrecisionCtx::with_bits(bits);
        return complex_out(modular_lambda(HPoint::make(to_real_arg(x), to_real_arg(y)), ctx).value, bits);
      },
      py::arg("x"), py::arg("y"), py::arg("bits") = 256);

  m.def(
      "classes",
      [](long long N) {
        return json_loads(classset_to_json(enumerate_classes(BigInt(N))));
      },
      py::arg("N"), "Class set of level N as a dict with decimal-string integers.");

  m.def(
      "pell_min",
      [](long long N) {
        PellSolution p = pell_min(BigInt(N));
        return py::make_tuple(py::int_(py::str(p.t.str())), py::int_(py::str(p.u.str())));
      },
      py::arg("N"));

  m.def(
      "fundamental_automorph",
      [](const std::vector<std::vector<long long>>& A) {
        if (A.size() != 2 || A[0].size() != 2 || A[1].size() != 2) throw py::value_error("2x2 matrix expected");
        Mat2Z P = fundamental_automorph(Mat2Z{A[0][0], A[0][1], A[1][0], A[1][1]});
        auto e = [](const BigInt& v) { return py::int_(py::str(v.str())); };
        return py::make_tuple(py::make_tuple(e(P.a), e(P.b)), py::make_tuple(e(P.c), e(P.d)));
      },
      py::arg("A"));

  m.def(
      "phi_coefficients",
      [](long long N) {
        py::dict out;
        for (const auto& [ex, c] : exact_phi(N).terms) out[py::make_tuple(ex.first, ex.second)] = py::int_(py::str(c.str()));
        return out;
      },
      py::arg("N"), "Exact Phi_N coefficients {(i, j): c} for N <= 5.");

  m.def(
      "lemniscate_residual",
      [](std::size_t samples, unsigned bits) {
        ScopedPrecision sp(bits);
        auto ctx = PrecisionCtx::with_bits(bits);
        return format_real(lemniscate_check(samples, Real(0), ctx).max_residual, 6);
      },
      py::arg("samples") = 200, py::arg("bits") = 256);

  m.def(
      "algtest",
      [](const py::object& x0, const py::object& r, int dmax, std::size_t samples, std::optional<std::uint64_t> seed,
         unsigned bits) {
        ScopedPrecision sp(bits);
        auto ctx = PrecisionCtx::with_bits(bits);
        Geodesic g = r.is_none() ? Geodesic::vertical(to_rational_arg(x0))
                                 : Geodesic::semicircle(to_rational_arg(x0), to_rational_arg(r));
        VerdictOptions opt;
        opt.samples = samples;
        opt.seed = seed;
        BialgebraicVerdict v = bialgebraic_verdict(g, dmax, opt, ctx);
        py::dict out;
        out["verdict"] = v.label();
        out["certified"] = v.certified;
        py::list res;
        for (const auto& x : v.residuals) res.append(format_real(x, 6));
        out["residuals"] = res;
        if (v.certificate) out["certificate"] = json_loads(fitreport_to_json(*v.certificate));
        return out;
      },
      py::arg("x0"), py::arg("r") = py::none(), py::arg("dmax") = 10, py::arg("samples") = 500,
      py::arg("seed") = py::none(), py::arg("bits") = 256,
      "Fit-based verdict for Vertical{x0} (r is None) or Semicircle{x0, r}, with exact rational inputs.");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<std::string> full{"specgeo"};
        full.insert(full.end(), args.begin(), args.end());
        std::vector<const char*> argv;
        for (const auto& a : full) argv.push_back(a.c_str());
        std::ostringstream out, err;
        int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run the command-line interface in-process; returns (exit code, stdout, stderr).");

  m.attr("EXIT_OK") = kExitOk;
  m.attr("EXIT_VERIFY_FAILED") = kExitVerifyFailed;
  m.attr("EXIT_USAGE") = kExitUsage;
}
