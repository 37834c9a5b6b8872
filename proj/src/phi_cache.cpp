#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "json.hpp"
#include "specgeo/modpoly.hpp"

namespace specgeo {

namespace {

using nlohmann::json;

// FNV-1a over "N;i,j,c;i,j,c;..." in term order.
std::string checksum(const BivarZPoly& P) {
  std::ostringstream os;
  os << P.N << ';';
  for (const auto& [e, c] : P.terms) os << e.first << ',' << e.second << ',' << c << ';';
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : os.str()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

std::filesystem::path phi_cache_path(const std::filesystem::path& dir, std::int64_t N) {
  return dir / ("phi_" + std::to_string(N) + ".json");
}

std::string phi_to_json(const BivarZPoly& P) {
  json coeffs = json::array();
  for (const auto& [e, c] : P.terms)
    coeffs.push_back({{"i", e.first}, {"j", e.second}, {"c", c.str()}});
  json doc = {{"N", P.N}, {"degree", P.degree_x()}, {"coeffs", coeffs}, {"checksum", checksum(P)}};
  return doc.dump(1) + "\n";
}

BivarZPoly phi_from_json(const std::string& text) {
  json doc = json::parse(text);
  BivarZPoly P;
  P.N = doc.at("N").get<std::int64_t>();
  for (const auto& t : doc.at("coeffs")) {
    BigInt c(t.at("c").get<std::string>());
    if (c != 0) P.terms[{t.at("i").get<int>(), t.at("j").get<int>()}] = c;
  }
  if (doc.contains("degree") && doc.at("degree").get<int>() != P.degree_x())
    throw std::runtime_error("phi cache: degree field does not match coefficients");
  if (doc.contains("checksum") && doc.at("checksum").get<std::string>() != checksum(P))
    throw std::runtime_error("phi cache: checksum mismatch");
  return P;
}

void write_phi_cache(const std::filesystem::path& dir, const BivarZPoly& P) {
  std::filesystem::create_directories(dir);
  std::filesystem::path target = phi_cache_path(dir, P.N);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << phi_to_json(P);
    if (!out.flush()) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

std::optional<BivarZPoly> read_phi_cache(const std::filesystem::path& dir, std::int64_t N) {
  std::ifstream in(phi_cache_path(dir, N), std::ios::binary);
  if (!in) return std::nullopt;
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    BivarZPoly P = phi_from_json(ss.str());
    if (P.N != N) return std::nullopt;
    return P;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace specgeo
