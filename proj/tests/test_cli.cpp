#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "specgeo/cli.hpp"
#include "support.hpp"

using namespace specgeo;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "specgeo");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"nosuch"}).code == kExitUsage);
  CHECK(run({"classes"}).code == kExitUsage);
  CHECK(run({"classes", "0"}).code == kExitUsage);
  CHECK(run({"classes", "4"}).code == kExitUsage);
  CHECK(run({"--prec", "32", "j", "0", "1"}).code == kExitUsage);
  CHECK(run({"--format", "svg", "j", "0", "1"}).code == kExitUsage);
  CHECK(run({"--format", "xml", "classes", "5"}).code == kExitUsage);
  CHECK(run({"j", "0", "-1"}).code == kExitUsage);
  CHECK(run({"algtest", "ellipse", "1"}).code == kExitUsage);
  CHECK(run({"algtest", "--exp", "Q", "0.5"}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("classes") {
  Run r = run({"classes", "5"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("narrow classes: 2") != std::string::npos);

  Run js = run({"--format", "json", "classes", "82"});
  REQUIRE(js.code == kExitOk);
  auto doc = nlohmann::json::parse(js.out);
  CHECK(doc["N"] == "82");
  CHECK(doc["reps"].size() == 4);
  CHECK(doc["tilde_pairs"].size() == 3);
  CHECK(run({"--format", "json", "classes", "82"}).out == js.out);
  CHECK(run({"classes", "1"}).code == kExitOk);
}

TEST_CASE("j, invertj and lambda") {
  Run j = run({"j", "0", "1"});
  CHECK(j.code == kExitOk);
  CHECK(std::stod(j.out) == doctest::Approx(1728));
  Run jf = run({"j", "3/2", "1/2"});
  CHECK(jf.code == kExitOk);
  Run inv = run({"invertj", "1728", "0"});
  CHECK(inv.code == kExitOk);
  CHECK(inv.out.find("1") != std::string::npos);
  Run lam = run({"lambda", "0", "1"});
  CHECK(lam.code == kExitOk);
  CHECK(std::stod(lam.out) == doctest::Approx(0.5));
  Run csv = run({"--format", "csv", "j", "0", "2"});
  CHECK(csv.code == kExitOk);
  CHECK(csv.out.find("2.87496") != std::string::npos);
}

TEST_CASE("environment overrides") {
  setenv("SPECGEO_FORMAT", "json", 1);
  Run r = run({"classes", "5"});
  unsetenv("SPECGEO_FORMAT");
  CHECK(r.code == kExitOk);
  CHECK(nlohmann::json::parse(r.out)["N"] == "5");
  setenv("SPECGEO_PREC", "16", 1);
  CHECK(run({"j", "0", "1"}).code == kExitUsage);
  unsetenv("SPECGEO_PREC");
}

TEST_CASE("lemniscate") {
  CHECK(run({"lemniscate"}).code == kExitOk);
  Run bad = run({"--prec", "64", "--tol", "1e-30", "lemniscate"});
  CHECK(bad.code == kExitVerifyFailed);
  CHECK(bad.err.find("--prec 128") != std::string::npos);
}

TEST_CASE("zn writes deterministic artefacts") {
  auto dir = std::filesystem::temp_directory_path() / "specgeo_test_cli";
  std::filesystem::remove_all(dir);
  Run a = run({"--out", (dir / "a").string(), "--cache", (dir / "cache").string(), "zn", "2"});
  REQUIRE(a.code == kExitOk);
  Run b = run({"--out", (dir / "b").string(), "zn", "2"});
  REQUIRE(b.code == kExitOk);
  for (const char* f : {"zn_2.csv", "zn_2.svg", "zn_2.json"}) {
    CAPTURE(f);
    CHECK(std::filesystem::exists(dir / "a" / f));
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  }
  CHECK(std::filesystem::exists(dir / "cache" / "phi_2.json"));
  CHECK(slurp(dir / "a" / "zn_2.csv").rfind("x,y,provenance\n", 0) == 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("algtest") {
  Run v = run({"algtest", "vertical", "0"});
  CHECK(v.code == kExitOk);
  CHECK(v.out.find("WeaklyBialgebraic(1)") != std::string::npos);
  Run e = run({"--format", "json", "algtest", "--exp", "L", "0.5"});
  REQUIRE(e.code == kExitOk);
  auto doc = nlohmann::json::parse(e.out);
  CHECK(doc["containment"] == "Strong");
  Run p = run({"--seed", "1", "algtest", "--dmax", "4", "semicircle", "pi", "1"});
  CHECK(p.out.find("NoFitUpTo(4)") != std::string::npos);
}
