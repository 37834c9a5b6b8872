#include <cmath>
#include <fstream>
#include <sstream>

#include "specgeo/znreal.hpp"

namespace specgeo {

namespace {

const char* const kPalette[] = {"#1f4fd1", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#7f7f7f"};

std::string csv_field(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr double kSize = 800;
constexpr double kExtent = 1.05;

double px(double u) { return (u + kExtent) / (2 * kExtent) * kSize; }
double py(double v) { return (kExtent - v) / (2 * kExtent) * kSize; }

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string render_csv(const std::vector<PlaneSample>& samples) {
  std::ostringstream os;
  os << "x,y,provenance\n";
  for (const auto& s : samples) {
    std::string prov = csv_field(s.provenance);
    for (const auto& p : s.points) os << format_real(p.x, 20) << ',' << format_real(p.y, 20) << ',' << prov << '\n';
  }
  return os.str();
}

std::string render_svg(const std::vector<PlaneSample>& samples, const Chart& chart) {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
     << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << kSize << "\" height=\"" << kSize
     << "\" style=\"fill:#ffffff;stroke:none\"/>\n";
  os << "<line x1=\"0\" y1=\"" << num(py(0)) << "\" x2=\"" << kSize << "\" y2=\"" << num(py(0))
     << "\" style=\"stroke:#cccccc;stroke-width:1\"/>\n";
  os << "<line x1=\"" << num(px(0)) << "\" y1=\"0\" x2=\"" << num(px(0)) << "\" y2=\"" << kSize
     << "\" style=\"stroke:#cccccc;stroke-width:1\"/>\n";
  // Unit circle of the chart.
  os << "<circle cx=\"" << num(px(0)) << "\" cy=\"" << num(py(0)) << "\" r=\""
     << num(kSize / (2 * kExtent)) << "\" style=\"fill:none;stroke:#eeeeee;stroke-width:1\"/>\n";

  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto& s = samples[k];
    const char* color = kPalette[k % (sizeof kPalette / sizeof kPalette[0])];
    os << "<g id=\"class-" << k << "\">\n";
    os << "<title>" << xml_escape(s.provenance) << "</title>\n";
    if (s.kind == PlaneSample::Kind::Scatter) {
      for (const auto& p : s.points) {
        auto [u, v] = chart.to_chart(p.x, p.y);
        os << "<circle cx=\"" << num(px(u)) << "\" cy=\"" << num(py(v))
           << "\" r=\"1.5\" style=\"fill:" << color << ";stroke:none\"/>\n";
      }
    } else {
      // Break the path where consecutive samples jump across the chart.
      std::string pts;
      std::pair<double, double> prev{};
      auto flush = [&] {
        if (!pts.empty())
          os << "<polyline points=\"" << pts << "\" style=\"fill:none;stroke:" << color
             << ";stroke-width:1.5\"/>\n";
        pts.clear();
      };
      for (std::size_t i = 0; i < s.points.size(); ++i) {
        auto c = chart.to_chart(s.points[i].x, s.points[i].y);
        if (i > 0 && std::hypot(c.first - prev.first, c.second - prev.second) > 0.25) flush();
        if (!pts.empty()) pts += ' ';
        pts += num(px(c.first)) + "," + num(py(c.second));
        prev = c;
      }
      flush();
    }
    os << "<text x=\"10\" y=\"" << 20 + 18 * k << "\" style=\"font-family:monospace;font-size:13px;fill:"
       << color << "\">" << xml_escape(s.provenance) << "</text>\n";
    os << "</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace

std::string render_curves(const std::vector<PlaneSample>& samples, PlotFormat format,
                          const Chart& chart) {
  bool any = false;
  for (const auto& s : samples) any = any || !s.points.empty();
  if (!any) throw PreconditionError("nothing to plot");
  return format == PlotFormat::Csv ? render_csv(samples) : render_svg(samples, chart);
}

void emit_curve(const std::vector<PlaneSample>& samples, PlotFormat format, const Chart& chart,
                const std::filesystem::path& file) {
  const std::string text = render_curves(samples, format, chart);
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << text;
  if (!out.flush()) throw std::runtime_error("write failed: " + file.string());
}

}  // namespace specgeo
