#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

#ifndef NEVLAB_CLI_PATH
#error "NEVLAB_CLI_PATH must point at the nevlab binary"
#endif
#ifndef NEVLAB_CONFIG_DIR
#error "NEVLAB_CONFIG_DIR must point at the shipped configs"
#endif

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "nevlab_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

RunResult run_cli(const std::string& args, const fs::path& dir) {
  fs::path out_file = dir / "stdout.txt";
  fs::path err_file = dir / "stderr.txt";
  std::string cmd = std::string("\"") + NEVLAB_CLI_PATH + "\" " + args +
                    " > \"" + out_file.string() + "\" 2> \"" +
                    err_file.string() + "\"";
  int status = std::system(cmd.c_str());
  RunResult res;
  res.exit_code = (status >= 0 && status % 256 == 0) ? status / 256 : status;
#ifdef WEXITSTATUS
  if (status != -1) res.exit_code = WEXITSTATUS(status);
#endif
  res.out = slurp(out_file);
  res.err = slurp(err_file);
  return res;
}

std::string config_path(const std::string& name) {
  return (fs::path(NEVLAB_CONFIG_DIR) / name).string();
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("--version reports the package version") {
    fs::path dir = fresh_dir("version");
    RunResult res = run_cli("--version", dir);
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("nevlab 0.1.0") != std::string::npos);
  }

  TEST_CASE("a bare invocation demands a subcommand") {
    fs::path dir = fresh_dir("bare");
    CHECK(run_cli("", dir).exit_code != 0);
    CHECK(run_cli("--bogus-flag", dir).exit_code != 0);
  }

  TEST_CASE("dim-bound runs from flags alone") {
    fs::path dir = fresh_dir("dimbound");
    fs::path out = dir / "out";
    RunResult res = run_cli(
        "dim-bound --n 2 --N 2 --p 1 --out \"" + out.string() + "\"", dir);
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("dimension bound (n=2, N=2, p=1): 2") !=
          std::string::npos);
    CHECK(res.out.find("verdict: pass") != std::string::npos);
    CHECK(fs::exists(out / "manifest.json"));
  }

  TEST_CASE("dim-bound outside the admissible domain fails cleanly") {
    fs::path dir = fresh_dir("dimbound_bad");
    RunResult res = run_cli(
        "dim-bound --n 2 --N 1 --p 1 --out \"" + (dir / "out").string() +
        "\"", dir);
    CHECK(res.exit_code == 1);
    CHECK(res.err.find("error:") != std::string::npos);
  }

  TEST_CASE("check-position certifies the shipped exponential config") {
    fs::path dir = fresh_dir("checkpos");
    RunResult res = run_cli(
        "check-position --config \"" + config_path("smt_exp_q3.json") +
        "\" --out \"" + (dir / "out").string() + "\"", dir);
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("1-subgeneral position") != std::string::npos);
    CHECK(res.out.find("verdict: pass") != std::string::npos);
  }

  TEST_CASE("nochka reruns are byte-identical") {
    fs::path dir = fresh_dir("nochka_repro");
    fs::path out1 = dir / "a";
    fs::path out2 = dir / "b";
    std::string base = "nochka --config \"" +
                       config_path("nochka_p1_n2_q5.json") + "\" --out \"";
    RunResult r1 = run_cli(base + out1.string() + "\"", dir);
    RunResult r2 = run_cli(base + out2.string() + "\"", dir);
    CHECK(r1.exit_code == 0);
    CHECK(r2.exit_code == 0);
    CHECK(slurp(out1 / "weights.csv") == slurp(out2 / "weights.csv"));
    CHECK(slurp(out1 / "manifest.json") == slurp(out2 / "manifest.json"));
    CHECK(!slurp(out1 / "weights.csv").empty());
  }

  TEST_CASE("tchar writes its table, chart, and manifest") {
    fs::path dir = fresh_dir("tchar");
    fs::path cfg = dir / "cfg.json";
    {
      std::ofstream out(cfg);
      out << R"({
        "mapping": ["1", "z^2"],
        "grid": {"r_min": 2, "r_max": 12, "count": 4},
        "quadrature": 64
      })";
    }
    fs::path outdir = dir / "out";
    RunResult res = run_cli("tchar --config \"" + cfg.string() +
                            "\" --out \"" + outdir.string() + "\"", dir);
    CHECK(res.exit_code == 0);
    CHECK(fs::exists(outdir / "growth.csv"));
    CHECK(fs::exists(outdir / "growth.svg"));
    CHECK(fs::exists(outdir / "manifest.json"));
    std::string manifest = slurp(outdir / "manifest.json");
    CHECK(manifest.find("\"verdict\": \"pass\"") != std::string::npos);
    CHECK(manifest.find("\"command\": \"tchar\"") != std::string::npos);
  }

  TEST_CASE("broken configs exit with the config status") {
    fs::path dir = fresh_dir("badcfg");
    fs::path cfg = dir / "broken.json";
    {
      std::ofstream out(cfg);
      out << "{ \"mapping\": [";
    }
    RunResult res = run_cli("smt --config \"" + cfg.string() + "\" --out \"" +
                            (dir / "out").string() + "\"", dir);
    CHECK(res.exit_code == 2);
    CHECK(res.err.find("config error:") != std::string::npos);

    fs::path cfg2 = dir / "badexpr.json";
    {
      std::ofstream out(cfg2);
      out << R"({"mapping": ["1", "exp("], "hyperplanes": [[1,0],[0,1],[1,-1]]})";
    }
    RunResult res2 = run_cli("smt --config \"" + cfg2.string() +
                             "\" --out \"" + (dir / "out2").string() + "\"",
                             dir);
    CHECK(res2.exit_code == 2);

    RunResult res3 = run_cli("smt --config \"" + (dir / "missing.json").string() +
                             "\" --out \"" + (dir / "out3").string() + "\"",
                             dir);
    CHECK(res3.exit_code == 2);
  }

  TEST_CASE("failing verdict exits 1") {
    // Concurrent triple in P^2 claimed at N = 2: certification must fail.
    fs::path dir = fresh_dir("failpos");
    fs::path cfg = dir / "cfg.json";
    {
      std::ofstream out(cfg);
      out << R"({
        "hyperplanes": [[1,0,0],[0,1,0],[1,1,0],[0,0,1]],
        "N": 2,
        "n": 2
      })";
    }
    RunResult res = run_cli("check-position --config \"" + cfg.string() +
                            "\" --out \"" + (dir / "out").string() + "\"",
                            dir);
    CHECK(res.exit_code == 1);
    CHECK(res.out.find("FAILED") != std::string::npos);
    CHECK(res.out.find("verdict: fail") != std::string::npos);
  }
}
