#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nevlab/expr.hpp"
#include "nevlab/projective.hpp"
#include "nevlab/quadrature.hpp"
#include "nevlab/smt.hpp"

namespace nevlab::config {

using funcalg::Complex;

enum class Command {
  kCheckPosition,
  kNochka,
  kCasorati,
  kTchar,
  kFmtCheck,
  kLogdiff,
  kSmt,
  kChen,
  kDefects,
  kPartition,
  kDimBound,
};

/// Command by its CLI name ("check-position", "smt", ...).
Command parse_command(std::string_view name);
std::string_view command_name(Command cmd);

/// Strict complex literal "a+bi" where each part is a decimal (exponent
/// allowed) or a rational p/q; "i", "-i", "2i", "1/2-3/4i" all parse.
Complex parse_complex_literal(const std::string& text);

struct GridSpec {
  double r_min{2.0};
  double r_max{30.0};
  int count{12};
  nevanlinna::RGrid::Spacing spacing{nevanlinna::RGrid::Spacing::kLog};
};

/// One experiment, deserialized from a JSON config (comments permitted).
/// Parsing is total: any malformed field throws ConfigError carrying
/// line/column (for syntax) or the offending field path.
struct ExperimentConfig {
  std::vector<std::string> mapping;
  std::vector<funcalg::Expr> mapping_exprs;
  std::vector<std::vector<Complex>> hyperplanes;
  std::vector<std::string> hyperplane_labels;
  Complex c{1.0, 0.0};
  int N{1};
  int n{1};
  GridSpec grid;
  int quadrature{512};
  std::uint64_t seed{0x5eedbeef};
  std::string tolerance_profile{"default"};
  std::optional<double> hyperorder_estimate;
  double alpha{2.0};
  double delta{0.5};
  int p{1};
  bool assert_zero_sum{false};

  /// Raw config text and its origin (path or "<inline>"), kept for the run
  /// manifest.
  std::string raw_text;
  std::string origin;

  static ExperimentConfig from_file(const std::string& path);
  static ExperimentConfig from_json_text(const std::string& text,
                                         const std::string& origin);

  /// Cross-field validation for one command; throws ConfigError on any
  /// violation (e.g. the q(>2N-n+1) hypothesis for the margin commands).
  void validate_for(Command cmd) const;

  projgeom::ProjectiveMap make_map() const;
  projgeom::HyperplaneSystem make_system() const;
  nevanlinna::RGrid make_grid() const;
  smt::SmtOptions make_smt_options() const;
};

}  // namespace nevlab::config
