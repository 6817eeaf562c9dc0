// nevlab command-line front end. Each subcommand loads one experiment
// config, dispatches into the library, writes its report files plus a run
// manifest into --out, and exits 0 on a passing verdict, 1 on a failing
// verdict or computation error, 2 on a config/parse defect.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "nevlab/config.hpp"
#include "nevlab/determinants.hpp"
#include "nevlab/errors.hpp"
#include "nevlab/nevanlinna.hpp"
#include "nevlab/nochka.hpp"
#include "nevlab/parse.hpp"
#include "nevlab/projective.hpp"
#include "nevlab/report.hpp"
#include "nevlab/smt.hpp"

namespace fs = std::filesystem;
using namespace nevlab;

namespace {

#ifndef NEVLAB_VERSION
#define NEVLAB_VERSION "0.0.0"
#endif

struct Invocation {
  config::Command command;
  std::string config_path;
  std::string out_dir{"out"};
  std::optional<std::uint64_t> seed;
  std::optional<int> grid_points;
  std::optional<int> quadrature;
  std::optional<std::string> tolerance_profile;
  // dim-bound only; fall back to the config fields when absent.
  std::optional<int> dim_n;
  std::optional<int> dim_N;
  std::optional<int> dim_p;
};

std::string complex_str(funcalg::Complex v) {
  std::ostringstream os;
  os << report::format_double(v.real());
  if (v.imag() != 0.0) {
    os << (v.imag() < 0 ? "-" : "+") << report::format_double(std::fabs(v.imag()))
       << "i";
  }
  return os.str();
}

std::string subset_str(const std::vector<int>& subset) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < subset.size(); ++i)
    os << (i ? "," : "") << subset[i];
  os << "}";
  return os.str();
}

std::string grid_summary(const config::ExperimentConfig& cfg) {
  std::ostringstream os;
  os << cfg.grid.count
     << (cfg.grid.spacing == nevanlinna::RGrid::Spacing::kLog ? " log" : " linear")
     << " radii in [" << report::format_double(cfg.grid.r_min) << ", "
     << report::format_double(cfg.grid.r_max) << "], K=" << cfg.quadrature;
  return os.str();
}

report::Manifest base_manifest(const config::ExperimentConfig& cfg,
                               config::Command cmd) {
  report::Manifest m;
  m.command = std::string(config::command_name(cmd));
  m.config_origin = cfg.origin;
  m.config_hash = report::fnv1a(cfg.raw_text);
  m.seed = cfg.seed;
  m.quadrature = cfg.quadrature;
  m.tolerance_profile = cfg.tolerance_profile;
  m.grid_summary = grid_summary(cfg);
  m.version = NEVLAB_VERSION;
  return m;
}

int finish(const fs::path& out, report::Manifest m, bool pass) {
  m.verdict = pass ? "pass" : "fail";
  report::write_manifest(out / "manifest.json", m);
  std::cout << "verdict: " << m.verdict << "\n";
  return pass ? 0 : 1;
}

int run_check_position(const config::ExperimentConfig& cfg, const fs::path& out) {
  auto sys = cfg.make_system();
  auto cert = projgeom::check_subgeneral(sys);
  if (cert.pass) {
    std::cout << "position: " << sys.q() << " hyperplanes in " << sys.N
              << "-subgeneral position in P^" << sys.n << " ("
              << cert.verified_subsets.size() << " subsets verified)\n";
  } else {
    std::cout << "position: FAILED, subset " << subset_str(*cert.witness)
              << " has rank " << cert.witness_rank << " < " << sys.n + 1 << "\n";
  }
  return finish(out, base_manifest(cfg, config::Command::kCheckPosition),
                cert.pass);
}

int run_nochka(const config::ExperimentConfig& cfg, const fs::path& out) {
  auto sys = cfg.make_system();
  auto w = nochka::compute_weights(sys);
  auto cert = nochka::verify_weights(sys, w);

  std::cout << "omega_tilde = " << to_string(w.constant) << "\n";
  for (int j = 0; j < sys.q(); ++j)
    std::cout << "  omega(" << cfg.hyperplane_labels[j]
              << ") = " << to_string(w.weights[j]) << "\n";
  for (const auto& v : cert.violations)
    std::cout << "violated: " << v.description << "\n";

  std::vector<std::string> comments = {"nochka weights (exact values in the "
                                       "columns below are rounded)",
                                       "omega_tilde = " + to_string(w.constant)};
  std::string exact = "exact:";
  for (const auto& x : w.weights) exact += " " + to_string(x);
  comments.push_back(exact);
  std::vector<double> idx(w.weights.size()), vals(w.weights.size());
  for (std::size_t j = 0; j < w.weights.size(); ++j) {
    idx[j] = static_cast<double>(j);
    vals[j] = to_double(w.weights[j]);
  }
  report::write_csv(out / "weights.csv", comments,
                    std::vector<std::string>{"plane", "weight"}, {idx, vals});

  auto m = base_manifest(cfg, config::Command::kNochka);
  m.outputs = {"weights.csv"};
  return finish(out, std::move(m), cert.pass);
}

int run_casorati(const config::ExperimentConfig& cfg, const fs::path& out) {
  auto f = cfg.make_map();
  auto det = determinants::casorati(f.components, cfg.c);
  auto nd = determinants::nondegenerate_over_periodic(f, cfg.seed);

  std::cout << "casorati: " << det.size() << "x" << det.size() << " at c = "
            << complex_str(cfg.c)
            << (det.expanded ? " (symbolic expansion available)" : " (numeric)")
            << "\n";
  std::cout << (nd.nondegenerate ? "nondegenerate over the c-periodic field"
                                 : "degenerate: determinant vanishes at every "
                                   "sample relative to the row scale")
            << ", best |C|/scale = " << report::format_double(nd.best_ratio)
            << " at z = " << complex_str(nd.witness);
  if (nd.skipped > 0) std::cout << " (" << nd.skipped << " samples skipped)";
  std::cout << "\n";

  auto samples = funcalg::annulus_samples(64, cfg.seed);
  std::vector<double> re, im, absdet, scale;
  for (auto z : samples) {
    auto v = det.eval(z);
    auto s = det.row_norm_scale(z);
    if (!v.is_value() || !s) continue;
    re.push_back(z.real());
    im.push_back(z.imag());
    absdet.push_back(std::abs(v.value));
    scale.push_back(*s);
  }
  report::write_csv(out / "casorati.csv",
                    std::vector<std::string>{"casorati samples over the annulus"},
                    std::vector<std::string>{"re", "im", "abs_det", "row_scale"},
                    {re, im, absdet, scale});

  auto m = base_manifest(cfg, config::Command::kCasorati);
  m.outputs = {"casorati.csv"};
  return finish(out, std::move(m), nd.nondegenerate);
}

int run_tchar(const config::ExperimentConfig& cfg, const fs::path& out) {
  auto f = cfg.make_map();
  auto table = nevanlinna::tchar_table(f, cfg.make_grid());

  report::write_csv(out / "growth.csv",
                    std::vector<std::string>{"characteristic function over the grid"},
                    std::vector<std::string>{"r", "tchar"},
                    {table.radii, table.tchar});
  report::write_svg_lines(out / "growth.svg", "characteristic function", "r",
                          "T(r)", table.radii,
                          std::vector<report::Series>{{"T", table.tchar}});

  try {
    auto est = nevanlinna::order_estimates(table);
    std::cout << "order ~ " << report::format_double(est.order) << " (fit rms "
              << report::format_double(est.order_residual) << ")\n";
    std::cout << "hyperorder ~ " << report::format_double(est.hyperorder)
              << (est.finite_order_fit ? " (finite-order fit accepted)" : "")
              << "\n";
  } catch (const EstimateError& e) {
    std::cout << "order estimate unavailable: " << e.what() << "\n";
  }

  auto m = base_manifest(cfg, config::Command::kTchar);
  m.outputs = {"growth.csv", "growth.svg"};
  return finish(out, std::move(m), true);
}

int run_fmt_check(const config::ExperimentConfig& cfg, const fs::path& out) {
  auto f = cfg.make_map();
  auto sys = cfg.make_system();
  auto grid = cfg.make_grid();

  bool pass = true;
  std::vector<std::string> names = {"r"};
  std::vector<std::vector<double>> cols(1);
  std::vector<report::Series> residuals;
  for (int j = 0; j < sys.q(); ++j) {
    auto rep = nevanlinna::fmt_check(f, sys.planes[j], grid);
    pass = pass && rep.pass;
    const auto& label = cfg.hyperplane_labels[j];
    std::cout << label << ": oscillation "
              << report::format_double(rep.oscillation) << " vs budget "
              << report::format_double(rep.budget)
              << (rep.pass ? "" : "  EXCEEDED") << "\n";
    if (j == 0)
      for (const auto& row : rep.rows) cols[0].push_back(row.r);
    std::vector<double> nj, mj, res;
    for (const auto& row : rep.rows) {
      nj.push_back(row.counting);
      mj.push_back(row.proximity);
      res.push_back(row.residual);
    }
    names.insert(names.end(),
                 {"N_" + label, "m_" + label, "residual_" + label});
    cols.push_back(std::move(nj));
    cols.push_back(std::move(mj));
    residuals.push_back({label, res});
    cols.push_back(residuals.back().y);
  }
  report::write_csv(out / "fmt.csv",
                    std::vector<std::string>{"first-main-theorem ledger: "
                                             "residual = T - N - m per plane"},
                    names, cols);
  report::write_svg_lines(out / "fmt.svg", "T - N - m residuals", "r",
                          "residual", cols[0], residuals);

  auto m = base_manifest(cfg, config::Command::kFmtCheck);
  m.outputs = {"fmt.csv", "fmt.svg"};
  return finish(out, std::move(m), pass);
}

int run_logdiff(const config::ExperimentConfig& cfg, const fs::path& out) {
  auto rec = nevanlinna::normalize_at_origin(cfg.mapping_exprs[0]);
  if (rec.offset != funcalg::Complex{0.0, 0.0})
    std::cout << "recentered at z0 = " << complex_str(rec.offset) << "\n";
  double lp = nevanlinna::log_plus_inverse_at_origin(rec.g);

  projgeom::ProjectiveMap h({funcalg::parse_expr("1"), rec.g}, cfg.c, cfg.seed);
  auto oracle = [&](double s) { return nevanlinna::tchar(h, s, cfg.quadrature); };

  auto grid = cfg.make_grid();
  std::vector<double> prox(grid.radii.size()), bound(grid.radii.size());
  int failures = 0;
  for (std::size_t i = 0; i < grid.radii.size(); ++i) {
    double r = grid.radii[i];
    prox[i] = nevanlinna::logdiff_proximity(rec.g, cfg.c, r, cfg.quadrature);
    bound[i] = nevanlinna::logdiff_bound(oracle, cfg.c, r, cfg.alpha, cfg.delta,
                                         lp);
    if (prox[i] > bound[i] + 1e-12) ++failures;
  }
  double budget = 0.10 * static_cast<double>(grid.radii.size()) + 1e-12;
  bool pass = static_cast<double>(failures) <= budget;

  std::cout << "K(alpha=" << report::format_double(cfg.alpha)
            << ", delta=" << report::format_double(cfg.delta) << ", c="
            << complex_str(cfg.c) << ") = "
            << report::format_double(
                   nevanlinna::logdiff_constant(cfg.alpha, cfg.delta, cfg.c))
            << "\n";
  std::cout << "bound holds on " << grid.radii.size() - failures << "/"
            << grid.radii.size() << " radii\n";

  report::write_csv(out / "logdiff.csv",
                    std::vector<std::string>{"shift-quotient proximity against "
                                             "the explicit bound"},
                    std::vector<std::string>{"r", "proximity", "bound"},
                    {grid.radii, prox, bound});
  report::write_svg_lines(
      out / "logdiff.svg", "logarithmic difference", "r", "value", grid.radii,
      std::vector<report::Series>{{"proximity", prox}, {"bound", bound}});

  auto m = base_manifest(cfg, config::Command::kLogdiff);
  m.outputs = {"logdiff.csv", "logdiff.svg"};
  return finish(out, std::move(m), pass);
}

int run_margin(const config::ExperimentConfig& cfg, const fs::path& out,
               config::Command cmd) {
  auto f = cfg.make_map();
  auto sys = cfg.make_system();
  auto grid = cfg.make_grid();
  auto opts = cfg.make_smt_options();
  bool wronskian = cmd == config::Command::kChen;
  auto rep = wronskian ? smt::chen_margin(f, sys, grid, opts)
                       : smt::smt_margin(f, sys, grid, opts);

  auto coeff = wronskian ? smt::wronskian_coefficient(sys.N, sys.n)
                         : smt::casorati_coefficient(sys.N, sys.n);
  std::cout << "deficiency q-2N+n-1 = " << report::format_double(rep.deficiency)
            << ", determinant coefficient = " << to_string(coeff) << "\n";
  std::cout << "hyperorder estimate " << report::format_double(rep.hyperorder_estimate)
            << ", exceptional radii " << rep.exceptional_radii.size() << "/"
            << rep.grid.radii.size() << "\n";

  std::vector<std::string> names = {"r",   "tchar",  "lhs",      "rhs",
                                    "margin", "tolerance", "N_det"};
  std::vector<std::vector<double>> cols = {rep.grid.radii, rep.tchar, rep.lhs,
                                           rep.rhs,        rep.margin,
                                           rep.tolerance,  rep.counting_det};
  for (int j = 0; j < sys.q(); ++j) {
    names.push_back("N_" + cfg.hyperplane_labels[j]);
    cols.push_back(rep.counting[j]);
  }
  report::write_csv(out / "margin.csv",
                    std::vector<std::string>{
                        std::string("margin ledger, ") +
                        (wronskian ? "wronskian" : "casorati") +
                        " route, coefficient " + to_string(coeff)},
                    names, cols);

  std::vector<double> neg_tol(rep.tolerance.size());
  for (std::size_t i = 0; i < rep.tolerance.size(); ++i)
    neg_tol[i] = -rep.tolerance[i];
  report::write_svg_lines(out / "margin.svg", "margin against tolerance", "r",
                          "margin", rep.grid.radii,
                          std::vector<report::Series>{{"margin", rep.margin},
                                                      {"tol", rep.tolerance},
                                                      {"-tol", neg_tol}});

  auto m = base_manifest(cfg, cmd);
  m.outputs = {"margin.csv", "margin.svg"};
  return finish(out, std::move(m), rep.pass);
}

int run_defects(const config::ExperimentConfig& cfg, const fs::path& out) {
  auto rep = smt::defects(cfg.make_map(), cfg.make_system(), cfg.make_grid(),
                          cfg.make_smt_options());

  std::vector<double> idx(rep.plane_defects.size());
  for (std::size_t j = 0; j < rep.plane_defects.size(); ++j) {
    idx[j] = static_cast<double>(j);
    std::cout << "delta(" << cfg.hyperplane_labels[j]
              << ") = " << report::format_double(rep.plane_defects[j]) << "\n";
  }
  std::cout << "delta_C = " << report::format_double(rep.casorati_defect) << "\n";
  if (rep.wronskian_defect)
    std::cout << "delta_W = " << report::format_double(*rep.wronskian_defect)
              << "\n";
  std::cout << "relation: slack " << report::format_double(rep.relation_slack)
            << " against bound " << report::format_double(rep.relation_bound)
            << "\n";

  report::write_csv(out / "defects.csv",
                    std::vector<std::string>{
                        "plane defects; relation slack " +
                        report::format_double(rep.relation_slack)},
                    std::vector<std::string>{"plane", "defect"},
                    {idx, rep.plane_defects});

  auto m = base_manifest(cfg, config::Command::kDefects);
  m.outputs = {"defects.csv"};
  return finish(out, std::move(m), rep.pass);
}

int run_partition(const config::ExperimentConfig& cfg, const fs::path& out) {
  auto rep = smt::borel_partition(cfg.mapping_exprs, cfg.c, cfg.assert_zero_sum,
                                  cfg.seed);

  for (std::size_t k = 0; k < rep.classes.size(); ++k) {
    std::cout << "class " << k << ": " << subset_str(rep.classes[k]);
    if (rep.sums_checked)
      std::cout << "  sum residual "
                << report::format_double(rep.class_sum_residuals[k]);
    std::cout << "\n";
  }
  for (auto [i, j] : rep.inconclusive_pairs)
    std::cout << "inconclusive pair (" << i << "," << j << ")\n";
  std::cout << "dimension bound " << rep.dimension_bound << "\n";

  std::vector<double> member, cls;
  for (std::size_t k = 0; k < rep.classes.size(); ++k)
    for (int i : rep.classes[k]) {
      member.push_back(static_cast<double>(i));
      cls.push_back(static_cast<double>(k));
    }
  report::write_csv(out / "partition.csv",
                    std::vector<std::string>{"shift-periodicity classes"},
                    std::vector<std::string>{"member", "class"}, {member, cls});

  bool pass = !cfg.assert_zero_sum || rep.sums_pass;
  auto m = base_manifest(cfg, config::Command::kPartition);
  m.outputs = {"partition.csv"};
  return finish(out, std::move(m), pass);
}

int run_dim_bound(const Invocation& inv, const config::ExperimentConfig& cfg,
                  const fs::path& out) {
  int n = inv.dim_n.value_or(cfg.n);
  int N = inv.dim_N.value_or(cfg.N);
  int p = inv.dim_p.value_or(cfg.p);

  int bound;
  try {
    bound = smt::picard_dimension_bound(n, p, N);
  } catch (const DimensionError& e) {
    // Out-of-range parameters are a config defect, whichever way they came in.
    throw ConfigError(e.what());
  }
  std::cout << "dimension bound (n=" << n << ", N=" << N << ", p=" << p
            << "): " << bound << "\n";
  std::cout << "uniqueness threshold N/(N-n+1)+N-n = "
            << to_string(smt::uniqueness_threshold(n, N)) << "\n";

  auto m = base_manifest(cfg, config::Command::kDimBound);
  return finish(out, std::move(m), true);
}

int run(const Invocation& inv) {
  config::ExperimentConfig cfg;
  if (!inv.config_path.empty()) {
    cfg = config::ExperimentConfig::from_file(inv.config_path);
  } else {
    // Only dim-bound runs configless; synthesize an origin for the manifest.
    std::ostringstream flags;
    flags << "dim-bound n=" << inv.dim_n.value_or(cfg.n)
          << " N=" << inv.dim_N.value_or(cfg.N)
          << " p=" << inv.dim_p.value_or(cfg.p);
    cfg.raw_text = flags.str();
    cfg.origin = "<flags>";
  }
  if (inv.seed) cfg.seed = *inv.seed;
  if (inv.grid_points) cfg.grid.count = *inv.grid_points;
  if (inv.quadrature) cfg.quadrature = *inv.quadrature;
  if (inv.tolerance_profile) cfg.tolerance_profile = *inv.tolerance_profile;
  if (inv.command == config::Command::kDimBound) {
    if (!inv.config_path.empty()) cfg.validate_for(inv.command);
  } else {
    cfg.validate_for(inv.command);
  }

  fs::path out(inv.out_dir);
  fs::create_directories(out);

  switch (inv.command) {
    case config::Command::kCheckPosition:
      return run_check_position(cfg, out);
    case config::Command::kNochka:
      return run_nochka(cfg, out);
    case config::Command::kCasorati:
      return run_casorati(cfg, out);
    case config::Command::kTchar:
      return run_tchar(cfg, out);
    case config::Command::kFmtCheck:
      return run_fmt_check(cfg, out);
    case config::Command::kLogdiff:
      return run_logdiff(cfg, out);
    case config::Command::kSmt:
    case config::Command::kChen:
      return run_margin(cfg, out, inv.command);
    case config::Command::kDefects:
      return run_defects(cfg, out);
    case config::Command::kPartition:
      return run_partition(cfg, out);
    case config::Command::kDimBound:
      return run_dim_bound(inv, cfg, out);
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"desk-scale laboratory for difference Nevanlinna theory"};
  app.set_version_flag("--version", std::string("nevlab ") + NEVLAB_VERSION);
  app.require_subcommand(1);

  struct SubSpec {
    const char* name;
    const char* help;
    bool needs_config;
  };
  const std::vector<SubSpec> specs = {
      {"check-position", "certify N-subgeneral position of the hyperplanes", true},
      {"nochka", "solve and verify the weight system", true},
      {"casorati", "expand the shift determinant and test nondegeneracy", true},
      {"tchar", "tabulate the characteristic function over the grid", true},
      {"fmt-check", "residual T - N - m per hyperplane", true},
      {"logdiff", "shift-quotient proximity against the explicit bound", true},
      {"smt", "margin of the difference-determinant inequality", true},
      {"chen", "comparison margin on the derivative route", true},
      {"defects", "finite-grid defects and the defect relation", true},
      {"partition", "shift-periodicity classes of an expression list", true},
      {"dim-bound", "dimension bound for maps omitting n+p hyperplanes", false},
  };

  Invocation inv{};
  std::vector<CLI::App*> subs;
  for (const auto& spec : specs) {
    CLI::App* sub = app.add_subcommand(spec.name, spec.help);
    auto* copt = sub->add_option("--config", inv.config_path,
                                 "experiment config (JSON, comments allowed)");
    if (spec.needs_config) copt->required();
    sub->add_option("--out", inv.out_dir, "report directory (default: out)");
    sub->add_option("--seed", inv.seed, "override the sampling seed");
    sub->add_option("--grid-points", inv.grid_points,
                    "override the radial grid size");
    sub->add_option("--quadrature", inv.quadrature,
                    "override the quadrature depth K");
    sub->add_option("--tolerance-profile", inv.tolerance_profile,
                    "strict or default")
        ->check(CLI::IsMember({"strict", "default"}));
    if (std::string(spec.name) == "dim-bound") {
      sub->add_option("--n", inv.dim_n, "target projective dimension");
      sub->add_option("--N", inv.dim_N, "subgeneral position index");
      sub->add_option("--p", inv.dim_p, "number of omitted planes beyond n");
    }
    subs.push_back(sub);
  }

  CLI11_PARSE(app, argc, argv);

  for (std::size_t i = 0; i < subs.size(); ++i)
    if (subs[i]->parsed()) inv.command = config::parse_command(specs[i].name);

  try {
    return run(inv);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const funcalg::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
