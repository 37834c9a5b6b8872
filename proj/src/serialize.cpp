#include "specgeo/serialize.hpp"

#include "json.hpp"

namespace specgeo {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

unsigned digits_for(unsigned bits) { return bits_to_digits10(bits); }

std::string dec(const Real& v, unsigned bits) { return format_real(v, static_cast<int>(digits_for(bits))); }

unsigned bits_from_tag(const std::string& tag) {
  const std::string prefix = "mpfr-";
  if (tag.rfind(prefix, 0) != 0) throw std::runtime_error("unknown precision tag: " + tag);
  return static_cast<unsigned>(std::stoul(tag.substr(prefix.size())));
}

}  // namespace

std::string precision_tag(unsigned bits) { return "mpfr-" + std::to_string(bits); }

std::string classset_to_json(const ClassSet& cs, int indent) {
  ordered_json doc;
  doc["N"] = cs.N.str();
  ordered_json reps = ordered_json::array();
  for (const auto& m : cs.reps) reps.push_back({m.a.str(), m.b.str(), m.c.str(), m.d.str()});
  doc["reps"] = reps;
  ordered_json pairs = ordered_json::array();
  for (const auto& [i, j] : cs.tilde_pairs) pairs.push_back({std::to_string(i), std::to_string(j)});
  doc["tilde_pairs"] = pairs;
  return doc.dump(indent) + "\n";
}

ClassSet classset_from_json(const std::string& text) {
  json doc = json::parse(text);
  ClassSet cs;
  cs.N = BigInt(doc.at("N").get<std::string>());
  for (const auto& r : doc.at("reps")) {
    if (r.size() != 4) throw std::runtime_error("class rep needs four entries");
    cs.reps.push_back({BigInt(r[0].get<std::string>()), BigInt(r[1].get<std::string>()),
                       BigInt(r[2].get<std::string>()), BigInt(r[3].get<std::string>())});
  }
  for (const auto& p : doc.at("tilde_pairs")) {
    std::size_t i = std::stoul(p.at(0).get<std::string>()), j = std::stoul(p.at(1).get<std::string>());
    if (i >= cs.reps.size() || j >= cs.reps.size()) throw std::runtime_error("tilde pair out of range");
    cs.tilde_pairs.push_back({i, j});
  }
  return cs;
}

std::string fitreport_to_json(const FitReport& r, int indent) {
  ScopedPrecision sp(r.bits ? r.bits : 256);
  const unsigned b = r.bits ? r.bits : 256;
  ordered_json doc;
  doc["precision"] = precision_tag(b);
  doc["degree"] = r.degree;
  doc["samples"] = r.samples;
  ordered_json monos = ordered_json::array();
  for (const auto& [i, j] : r.monomials) monos.push_back({i, j});
  doc["monomials"] = monos;
  doc["sigma_min"] = dec(r.sigma_min, b);
  doc["residual"] = dec(r.residual, b);
  doc["gap_ratio"] = dec(r.gap_ratio, b);
  ordered_json coeffs = ordered_json::array();
  for (const auto& c : r.coeffs) coeffs.push_back(dec(c, b));
  doc["coeffs"] = coeffs;
  doc["normalization"] = {{"cx", dec(r.normalization.cx, b)},
                          {"cy", dec(r.normalization.cy, b)},
                          {"scale", dec(r.normalization.scale, b)}};
  return doc.dump(indent) + "\n";
}

FitReport fitreport_from_json(const std::string& text) {
  json doc = json::parse(text);
  FitReport r;
  r.bits = bits_from_tag(doc.at("precision").get<std::string>());
  ScopedPrecision sp(r.bits);
  r.degree = doc.at("degree").get<int>();
  r.samples = doc.at("samples").get<std::size_t>();
  for (const auto& m : doc.at("monomials")) r.monomials.push_back({m.at(0).get<int>(), m.at(1).get<int>()});
  r.sigma_min = parse_real(doc.at("sigma_min").get<std::string>());
  r.residual = parse_real(doc.at("residual").get<std::string>());
  r.gap_ratio = parse_real(doc.at("gap_ratio").get<std::string>());
  for (const auto& c : doc.at("coeffs")) r.coeffs.push_back(parse_real(c.get<std::string>()));
  const auto& n = doc.at("normalization");
  r.normalization.cx = parse_real(n.at("cx").get<std::string>());
  r.normalization.cy = parse_real(n.at("cy").get<std::string>());
  r.normalization.scale = parse_real(n.at("scale").get<std::string>());
  if (r.coeffs.size() != r.monomials.size()) throw std::runtime_error("fit report: coefficient count mismatch");
  return r;
}

std::string report_to_json(const VerificationReport& r, unsigned bits, int indent) {
  const unsigned b = bits;
  ordered_json doc;
  doc["claim"] = r.claim;
  doc["pass"] = r.pass;
  doc["precision"] = precision_tag(b);
  doc["max_residual"] = format_real(r.max_residual, 12);
  doc["tolerance"] = format_real(r.tolerance, 12);
  ordered_json w = ordered_json::array();
  for (const auto& p : r.witnesses) w.push_back({format_real(p.x, 20), format_real(p.y, 20)});
  doc["witnesses"] = w;
  ordered_json detail = ordered_json::object();
  for (const auto& [k, v] : r.detail) detail[k] = v;
  doc["detail"] = detail;
  return doc.dump(indent) + "\n";
}

}  // namespace specgeo
