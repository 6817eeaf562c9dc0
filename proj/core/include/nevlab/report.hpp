#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nevlab::report {

/// Shortest decimal string that round-trips to the same double; the same
/// value always formats identically, keeping reports byte-stable.
std::string format_double(double v);

/// FNV-1a of a byte string, printed as 16 hex digits in manifests.
std::uint64_t fnv1a(std::string_view bytes);

/// Column-major CSV with '#'-prefixed comment lines, then a header row.
/// All columns must share one length.
void write_csv(const std::filesystem::path& path,
               std::span<const std::string> comments,
               std::span<const std::string> column_names,
               const std::vector<std::vector<double>>& columns);

struct Series {
  std::string name;
  std::vector<double> y;
};

/// Self-contained SVG line chart of the series against a shared x axis.
void write_svg_lines(const std::filesystem::path& path,
                     const std::string& title, const std::string& x_label,
                     const std::string& y_label, const std::vector<double>& x,
                     std::span<const Series> series);

struct Manifest {
  std::string command;
  std::string config_origin;
  std::uint64_t config_hash{0};
  std::uint64_t seed{0};
  int quadrature{0};
  std::string tolerance_profile;
  std::string grid_summary;
  std::string version;
  std::vector<std::string> outputs;
  std::string verdict;
};

/// Reproducibility record of one run: everything needed to regenerate the
/// report files, and nothing volatile (no timestamps, no host data).
void write_manifest(const std::filesystem::path& path, const Manifest& m);

}  // namespace nevlab::report
