#include "nevlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "nevlab/errors.hpp"

namespace nevlab::report {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  return out;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char ch : s) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(ch);
    }
  }
  return out;
}

constexpr const char* kPalette[] = {"#1f6fb2", "#c0392b", "#1e8449",
                                    "#8e44ad", "#d68910", "#148f95"};

/// Round-ish tick positions covering [lo, hi].
std::vector<double> ticks(double lo, double hi, int target) {
  if (!(hi > lo)) return {lo};
  const double raw = (hi - lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double mult : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    if (mag * mult >= raw) {
      step = mag * mult;
      break;
    }
  }
  std::vector<double> out;
  double t = std::ceil(lo / step) * step;
  for (; t <= hi + step * 1e-9; t += step) out.push_back(t == 0.0 ? 0.0 : t);
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  for (int precision = 1; precision <= 17; ++precision) {
    std::ostringstream os;
    os.precision(precision);
    os << v;
    if (std::stod(os.str()) == v) return os.str();
  }
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

void write_csv(const std::filesystem::path& path,
               std::span<const std::string> comments,
               std::span<const std::string> column_names,
               const std::vector<std::vector<double>>& columns) {
  if (column_names.size() != columns.size())
    throw DimensionError("write_csv: one name per column required");
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& col : columns)
    if (col.size() != rows)
      throw DimensionError("write_csv: ragged columns");

  std::ofstream out = open_out(path);
  for (const std::string& line : comments) out << "# " << line << "\n";
  for (std::size_t k = 0; k < column_names.size(); ++k)
    out << (k ? "," : "") << column_names[k];
  out << "\n";
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t k = 0; k < columns.size(); ++k)
      out << (k ? "," : "") << format_double(columns[k][r]);
    out << "\n";
  }
}

void write_svg_lines(const std::filesystem::path& path,
                     const std::string& title, const std::string& x_label,
                     const std::string& y_label, const std::vector<double>& x,
                     std::span<const Series> series) {
  if (x.empty() || series.empty())
    throw Error("write_svg_lines: nothing to plot");
  for (const Series& s : series)
    if (s.y.size() != x.size())
      throw DimensionError("write_svg_lines: series length mismatch");

  double x_lo = x.front(), x_hi = x.front();
  for (double v : x) {
    x_lo = std::min(x_lo, v);
    x_hi = std::max(x_hi, v);
  }
  double y_lo = series.front().y.front(), y_hi = y_lo;
  for (const Series& s : series)
    for (double v : s.y) {
      y_lo = std::min(y_lo, v);
      y_hi = std::max(y_hi, v);
    }
  if (x_hi == x_lo) x_hi = x_lo + 1.0;
  if (y_hi == y_lo) {
    y_lo -= 1.0;
    y_hi += 1.0;
  }
  const double pad = 0.05 * (y_hi - y_lo);
  y_lo -= pad;
  y_hi += pad;

  const double width = 800, height = 500;
  const double ml = 70, mr = 160, mt = 40, mb = 55;
  auto px = [&](double v) {
    return ml + (v - x_lo) / (x_hi - x_lo) * (width - ml - mr);
  };
  auto py = [&](double v) {
    return height - mb - (v - y_lo) / (y_hi - y_lo) * (height - mt - mb);
  };

  std::ofstream out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n";
  out << "<rect width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">"
      << xml_escape(title) << "</text>\n";

  // Axes, ticks, grid lines.
  out << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\""
      << width - mr << "\" y2=\"" << height - mb
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
  for (double t : ticks(x_lo, x_hi, 6)) {
    const double gx = px(t);
    out << "<line x1=\"" << gx << "\" y1=\"" << height - mb << "\" x2=\""
        << gx << "\" y2=\"" << height - mb + 5 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << gx << "\" y=\"" << height - mb + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << format_double(t) << "</text>\n";
  }
  for (double t : ticks(y_lo, y_hi, 6)) {
    const double gy = py(t);
    out << "<line x1=\"" << ml << "\" y1=\"" << gy << "\" x2=\""
        << width - mr << "\" y2=\"" << gy
        << "\" stroke=\"#dddddd\" stroke-width=\"0.7\"/>\n";
    out << "<text x=\"" << ml - 8 << "\" y=\"" << gy + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << format_double(t) << "</text>\n";
  }
  out << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">"
      << xml_escape(x_label) << "</text>\n";
  out << "<text x=\"18\" y=\"" << (mt + height - mb) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\" transform=\"rotate(-90 18 "
      << (mt + height - mb) / 2 << ")\">" << xml_escape(y_label)
      << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kPalette[k % std::size(kPalette)];
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.8\" points=\"";
    for (std::size_t i = 0; i < x.size(); ++i)
      out << (i ? " " : "") << px(x[i]) << "," << py(series[k].y[i]);
    out << "\"/>\n";
    const double ly = mt + 18.0 * static_cast<double>(k);
    out << "<line x1=\"" << width - mr + 10 << "\" y1=\"" << ly << "\" x2=\""
        << width - mr + 34 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2.5\"/>\n";
    out << "<text x=\"" << width - mr + 40 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">"
        << xml_escape(series[k].name) << "</text>\n";
  }
  out << "</svg>\n";
}

void write_manifest(const std::filesystem::path& path, const Manifest& m) {
  nlohmann::json j;
  j["command"] = m.command;
  j["config"] = m.config_origin;
  {
    std::ostringstream hex;
    hex << std::hex;
    hex.width(16);
    hex.fill('0');
    hex << m.config_hash;
    j["config_fnv1a"] = hex.str();
  }
  j["seed"] = m.seed;
  j["quadrature"] = m.quadrature;
  j["tolerance_profile"] = m.tolerance_profile;
  j["grid"] = m.grid_summary;
  j["version"] = m.version;
  j["outputs"] = m.outputs;
  j["verdict"] = m.verdict;
  std::ofstream out = open_out(path);
  out << j.dump(2) << "\n";
}

}  // namespace nevlab::report
