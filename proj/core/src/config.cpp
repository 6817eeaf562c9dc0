#include "nevlab/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "nevlab/parse.hpp"

namespace nevlab::config {

namespace {

using nlohmann::json;

struct NamedCommand {
  std::string_view name;
  Command cmd;
};

constexpr NamedCommand kCommands[] = {
    {"check-position", Command::kCheckPosition},
    {"nochka", Command::kNochka},
    {"casorati", Command::kCasorati},
    {"tchar", Command::kTchar},
    {"fmt-check", Command::kFmtCheck},
    {"logdiff", Command::kLogdiff},
    {"smt", Command::kSmt},
    {"chen", Command::kChen},
    {"defects", Command::kDefects},
    {"partition", Command::kPartition},
    {"dim-bound", Command::kDimBound},
};

std::pair<int, int> line_and_column(const std::string& text,
                                    std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

double parse_real_part(const std::string& t) {
  auto strict_double = [](const std::string& s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
      throw ConfigError("malformed numeric literal '" + s + "'");
    return v;
  };
  const std::size_t slash = t.find('/');
  if (slash == std::string::npos) return strict_double(t);
  const double num = strict_double(t.substr(0, slash));
  const double den = strict_double(t.substr(slash + 1));
  if (den == 0.0) throw ConfigError("zero denominator in '" + t + "'");
  return num / den;
}

}  // namespace

Command parse_command(std::string_view name) {
  for (const NamedCommand& c : kCommands)
    if (c.name == name) return c.cmd;
  throw ConfigError("unknown command '" + std::string(name) + "'");
}

std::string_view command_name(Command cmd) {
  for (const NamedCommand& c : kCommands)
    if (c.cmd == cmd) return c.name;
  return "?";
}

Complex parse_complex_literal(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.empty()) throw ConfigError("empty complex literal");

  // Split into signed terms; +/- directly after an exponent marker or a
  // slash belongs to the number.
  std::vector<std::string> terms;
  std::size_t start = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E' &&
        s[i - 1] != '/') {
      terms.push_back(s.substr(start, i - start));
      start = i;
    }
  }
  terms.push_back(s.substr(start));
  if (terms.size() > 2)
    throw ConfigError("complex literal '" + text +
                      "' has more than two terms");

  bool have_re = false, have_im = false;
  double re = 0.0, im = 0.0;
  for (std::string term : terms) {
    double sign = 1.0;
    if (!term.empty() && (term[0] == '+' || term[0] == '-')) {
      if (term[0] == '-') sign = -1.0;
      term.erase(term.begin());
    }
    if (term.empty())
      throw ConfigError("dangling sign in complex literal '" + text + "'");
    if (term.back() == 'i') {
      if (have_im)
        throw ConfigError("two imaginary terms in '" + text + "'");
      have_im = true;
      term.pop_back();
      im = sign * (term.empty() ? 1.0 : parse_real_part(term));
    } else {
      if (have_re) throw ConfigError("two real terms in '" + text + "'");
      have_re = true;
      re = sign * parse_real_part(term);
    }
  }
  return {re, im};
}

namespace {

Complex complex_field(const json& v, const std::string& where) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_string()) {
    try {
      return parse_complex_literal(v.get<std::string>());
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  throw ConfigError(where + ": expected a number or a complex literal string");
}

}  // namespace

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str(), path);
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text,
                                                  const std::string& origin) {
  json j;
  try {
    j = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    auto [line, col] = line_and_column(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ConfigError("config " + origin + ": parse error at line " +
                      std::to_string(line) + ", column " +
                      std::to_string(col) + ": " + e.what());
  }
  if (!j.is_object())
    throw ConfigError("config " + origin + ": top level must be an object");

  ExperimentConfig cfg;
  cfg.raw_text = text;
  cfg.origin = origin;

  auto field = [&](const char* name) -> const json* {
    auto it = j.find(name);
    return it == j.end() ? nullptr : &*it;
  };

  if (const json* v = field("mapping")) {
    if (!v->is_array())
      throw ConfigError("config: 'mapping' must be an array of expressions");
    for (std::size_t k = 0; k < v->size(); ++k) {
      const json& entry = (*v)[k];
      if (!entry.is_string())
        throw ConfigError("config: mapping[" + std::to_string(k) +
                          "] must be an expression string");
      cfg.mapping.push_back(entry.get<std::string>());
      try {
        cfg.mapping_exprs.push_back(funcalg::parse_expr(cfg.mapping.back()));
      } catch (const funcalg::ParseError& e) {
        throw ConfigError("config: mapping[" + std::to_string(k) +
                          "]: " + e.what());
      }
    }
  }

  if (const json* v = field("hyperplanes")) {
    if (!v->is_array())
      throw ConfigError("config: 'hyperplanes' must be an array of rows");
    for (std::size_t r = 0; r < v->size(); ++r) {
      const json& row = (*v)[r];
      if (!row.is_array())
        throw ConfigError("config: hyperplanes[" + std::to_string(r) +
                          "] must be a coefficient row");
      std::vector<Complex> coeffs;
      for (std::size_t k = 0; k < row.size(); ++k)
        coeffs.push_back(complex_field(row[k], "config: hyperplanes[" +
                                                   std::to_string(r) + "][" +
                                                   std::to_string(k) + "]"));
      cfg.hyperplanes.push_back(std::move(coeffs));
      cfg.hyperplane_labels.push_back("H" + std::to_string(r + 1));
    }
  }
  if (const json* v = field("labels")) {
    if (!v->is_array() || v->size() != cfg.hyperplanes.size())
      throw ConfigError(
          "config: 'labels' must list one name per hyperplane row");
    for (std::size_t r = 0; r < v->size(); ++r) {
      if (!(*v)[r].is_string())
        throw ConfigError("config: labels[" + std::to_string(r) +
                          "] must be a string");
      cfg.hyperplane_labels[r] = (*v)[r].get<std::string>();
    }
  }

  if (const json* v = field("c")) cfg.c = complex_field(*v, "config: 'c'");

  auto int_field = [&](const char* name, int& out) {
    if (const json* v = field(name)) {
      if (!v->is_number_integer())
        throw ConfigError(std::string("config: '") + name +
                          "' must be an integer");
      out = v->get<int>();
    }
  };
  int_field("N", cfg.N);
  int n_given = -1;
  int_field("n", n_given);
  if (cfg.mapping.size() >= 2)
    cfg.n = static_cast<int>(cfg.mapping.size()) - 1;
  if (n_given >= 0) {
    if (cfg.mapping.size() >= 2 && n_given != cfg.n)
      throw ConfigError("config: 'n' contradicts the mapping length (n = " +
                        std::to_string(cfg.n) + " from " +
                        std::to_string(cfg.mapping.size()) + " components)");
    cfg.n = n_given;
  }
  int_field("p", cfg.p);
  int_field("quadrature", cfg.quadrature);

  if (const json* v = field("seed")) {
    if (!v->is_number_unsigned() && !v->is_number_integer())
      throw ConfigError("config: 'seed' must be a nonnegative integer");
    const auto raw = v->get<long long>();
    if (raw < 0) throw ConfigError("config: 'seed' must be nonnegative");
    cfg.seed = static_cast<std::uint64_t>(raw);
  }

  if (const json* v = field("grid")) {
    if (!v->is_object())
      throw ConfigError("config: 'grid' must be an object");
    auto num = [&](const char* name, double& out) {
      auto it = v->find(name);
      if (it == v->end()) return;
      if (!it->is_number())
        throw ConfigError(std::string("config: grid.") + name +
                          " must be a number");
      out = it->get<double>();
    };
    num("r_min", cfg.grid.r_min);
    num("r_max", cfg.grid.r_max);
    if (auto it = v->find("count"); it != v->end()) {
      if (!it->is_number_integer())
        throw ConfigError("config: grid.count must be an integer");
      cfg.grid.count = it->get<int>();
    }
    if (auto it = v->find("spacing"); it != v->end()) {
      if (!it->is_string())
        throw ConfigError("config: grid.spacing must be 'linear' or 'log'");
      const std::string s = it->get<std::string>();
      if (s == "linear")
        cfg.grid.spacing = nevanlinna::RGrid::Spacing::kLinear;
      else if (s == "log")
        cfg.grid.spacing = nevanlinna::RGrid::Spacing::kLog;
      else
        throw ConfigError("config: grid.spacing must be 'linear' or 'log'");
    }
  }

  if (const json* v = field("tolerance_profile")) {
    if (!v->is_string())
      throw ConfigError("config: 'tolerance_profile' must be a string");
    cfg.tolerance_profile = v->get<std::string>();
    if (cfg.tolerance_profile != "default" &&
        cfg.tolerance_profile != "strict")
      throw ConfigError(
          "config: 'tolerance_profile' must be 'default' or 'strict'");
  }
  if (const json* v = field("hyperorder_estimate")) {
    if (!v->is_number())
      throw ConfigError("config: 'hyperorder_estimate' must be a number");
    cfg.hyperorder_estimate = v->get<double>();
  }
  if (const json* v = field("alpha")) {
    if (!v->is_number()) throw ConfigError("config: 'alpha' must be a number");
    cfg.alpha = v->get<double>();
  }
  if (const json* v = field("delta")) {
    if (!v->is_number()) throw ConfigError("config: 'delta' must be a number");
    cfg.delta = v->get<double>();
  }
  if (const json* v = field("assert_zero_sum")) {
    if (!v->is_boolean())
      throw ConfigError("config: 'assert_zero_sum' must be a boolean");
    cfg.assert_zero_sum = v->get<bool>();
  }
  return cfg;
}

void ExperimentConfig::validate_for(Command cmd) const {
  const bool needs_map =
      cmd == Command::kCasorati || cmd == Command::kTchar ||
      cmd == Command::kFmtCheck || cmd == Command::kSmt ||
      cmd == Command::kChen || cmd == Command::kDefects;
  const bool needs_planes =
      cmd == Command::kCheckPosition || cmd == Command::kNochka ||
      cmd == Command::kFmtCheck || cmd == Command::kSmt ||
      cmd == Command::kChen || cmd == Command::kDefects;
  const bool needs_margin_count = cmd == Command::kNochka ||
                                  cmd == Command::kSmt ||
                                  cmd == Command::kChen ||
                                  cmd == Command::kDefects;
  const bool needs_grid = cmd == Command::kTchar || cmd == Command::kFmtCheck ||
                          cmd == Command::kLogdiff || cmd == Command::kSmt ||
                          cmd == Command::kChen || cmd == Command::kDefects;

  if (needs_map) {
    if (mapping.size() < 2)
      throw ConfigError(
          "config: 'mapping' needs at least two component expressions");
    if (static_cast<int>(mapping.size()) != n + 1)
      throw ConfigError("config: mapping has " +
                        std::to_string(mapping.size()) +
                        " components but n+1 = " + std::to_string(n + 1));
  }
  if (cmd == Command::kLogdiff && mapping.size() != 1)
    throw ConfigError(
        "config: logdiff takes a single expression in 'mapping'");
  if (cmd == Command::kPartition && mapping.size() < 2)
    throw ConfigError("config: partition needs at least two expressions");

  if (needs_planes) {
    if (hyperplanes.empty())
      throw ConfigError("config: 'hyperplanes' is required for this command");
    for (std::size_t r = 0; r < hyperplanes.size(); ++r)
      if (static_cast<int>(hyperplanes[r].size()) != n + 1)
        throw ConfigError("config: hyperplanes[" + std::to_string(r) +
                          "] has " + std::to_string(hyperplanes[r].size()) +
                          " coefficients, expected n+1 = " +
                          std::to_string(n + 1));
    if (n < 1 || N < n)
      throw ConfigError("config: need 1 <= n <= N (n = " + std::to_string(n) +
                        ", N = " + std::to_string(N) + ")");
    const int q = static_cast<int>(hyperplanes.size());
    if (q < N + 1)
      throw ConfigError("config: need at least N+1 = " + std::to_string(N + 1) +
                        " hyperplanes, got " + std::to_string(q));
    if (needs_margin_count && q <= 2 * N - n + 1)
      throw ConfigError("config: the hypothesis q(>2N-n+1) fails: q = " +
                        std::to_string(q) +
                        ", 2N-n+1 = " + std::to_string(2 * N - n + 1));
  }

  if (needs_grid) {
    if (!(grid.r_min > 1.0))
      throw ConfigError("config: grid.r_min must exceed 1");
    if (!(grid.r_max > grid.r_min))
      throw ConfigError("config: grid.r_max must exceed grid.r_min");
    if (grid.count < 2) throw ConfigError("config: grid.count must be >= 2");
    if (quadrature < nevanlinna::kMinQuadraturePoints)
      throw ConfigError("config: quadrature must be >= 64");
  }

  if (cmd == Command::kLogdiff) {
    if (!(delta > 0.0 && delta < 1.0))
      throw ConfigError("config: 'delta' must lie in (0,1)");
    if (!(alpha > 1.0)) throw ConfigError("config: 'alpha' must exceed 1");
  }
  if (cmd == Command::kDimBound) {
    if (n < 1 || N < n)
      throw ConfigError("config: need 1 <= n <= N for dim-bound");
    if (p < 1) throw ConfigError("config: need p >= 1 for dim-bound");
  }
}

projgeom::ProjectiveMap ExperimentConfig::make_map() const {
  return projgeom::ProjectiveMap(mapping_exprs, c, seed);
}

projgeom::HyperplaneSystem ExperimentConfig::make_system() const {
  std::vector<projgeom::Hyperplane> planes;
  planes.reserve(hyperplanes.size());
  for (std::size_t r = 0; r < hyperplanes.size(); ++r)
    planes.emplace_back(hyperplanes[r], hyperplane_labels[r]);
  return projgeom::HyperplaneSystem(std::move(planes), N, n);
}

nevanlinna::RGrid ExperimentConfig::make_grid() const {
  return nevanlinna::RGrid::make(grid.r_min, grid.r_max, grid.count,
                                 grid.spacing, quadrature);
}

smt::SmtOptions ExperimentConfig::make_smt_options() const {
  smt::SmtOptions opts;
  if (tolerance_profile == "strict") opts.quadrature_budget = 0.05;
  opts.hyperorder_estimate = hyperorder_estimate;
  return opts;
}

}  // namespace nevlab::config
