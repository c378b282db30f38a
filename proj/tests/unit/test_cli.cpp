#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <regex>
#include <sstream>
#include <string>
#include <unistd.h>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using vanhove::cli::run;

namespace {

struct Run {
  int status;
  std::string out, err;
};

Run vh(std::vector<std::string> args) {
  args.insert(args.begin(), "vanhove");
  std::ostringstream out, err;
  const int s = run(args, out, err);
  return {s, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("vanhove_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream f(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(f, line)) {
    std::vector<std::string> r;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) r.push_back(c);
    rows.push_back(r);
  }
  return rows;
}

int shell_status(const std::string& cmd) {
  const int s = std::system(cmd.c_str());
  return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
}

}  // namespace

TEST_CASE("help documents the CSV columns") {
  const auto r = vh({"dsigma-domega", "--help"});
  CHECK(r.status == 0);
  CHECK(r.out.find("im_d0_sigma2") != std::string::npos);
  CHECK(r.out.find("--q0-points") != std::string::npos);
}

TEST_CASE("dsigma-domega sweep recovers -4 ln2") {
  const auto dir = scratch("dsigma");
  const auto r = vh({"dsigma-domega", "--out", dir.string(), "--plot"});
  REQUIRE(r.status == 0);
  const auto csv = read_csv(dir / "dsigma-domega.csv");
  REQUIRE(csv.size() == 10);
  CHECK(csv[0][0] == "q0");
  const auto m = json::parse(slurp(dir / "dsigma-domega.manifest.json"));
  CHECK(m["schema"] == "vanhove-lab/1");
  CHECK(m["rows"] == 9);
  CHECK(m["columns"].size() == csv[0].size());
  CHECK(m["converged"] == true);
  CHECK(m.contains("wall_time_seconds"));
  const double a = m["report"]["fit"]["a"];
  CHECK(std::abs(a + 4.0 * std::numbers::ln2) < 0.05 * 4.0 * std::numbers::ln2);
  const auto svg = slurp(dir / "dsigma-domega.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("generated") != std::string::npos);
}

TEST_CASE("CSV reals carry 17 significant digits") {
  const auto dir = scratch("digits");
  REQUIRE(vh({"bubble-ph", "--out", dir.string(), "--beta-list", "10,20"}).status == 0);
  const auto csv = read_csv(dir / "bubble-ph.csv");
  const std::regex sci(R"(-?\d\.\d{16}e[+-]\d{2,3})");
  for (std::size_t i = 1; i < csv.size(); ++i)
    for (const auto& c : csv[i]) CHECK(std::regex_match(c, sci));
}

TEST_CASE("bubble-pp residuals stay below 1e-4") {
  const auto dir = scratch("pp");
  REQUIRE(vh({"bubble-pp", "--out", dir.string()}).status == 0);
  const auto csv = read_csv(dir / "bubble-pp.csv");
  REQUIRE(csv.size() == 5);
  for (std::size_t i = 1; i < csv.size(); ++i) CHECK(std::abs(std::stod(csv[i][3])) < 1e-4);
}

TEST_CASE("interval-check holds over the bundled corpus") {
  const auto dir = scratch("interval");
  REQUIRE(vh({"interval-check", "--out", dir.string(), "--grid", "100000"}).status == 0);
  const auto csv = read_csv(dir / "interval-check.csv");
  REQUIRE(csv.size() == 301);
  for (std::size_t i = 1; i < csv.size(); ++i) CHECK(csv[i].back() == "1");
  const auto m = json::parse(slurp(dir / "interval-check.manifest.json"));
  CHECK(m["report"]["counterexamples"] == 0);
}

TEST_CASE("deterministic runs are byte-identical across thread counts") {
  const std::vector<std::string> common = {"sigma2", "--q0-points", "2", "--q0-min", "0.5", "--q0-max", "1.0",
                                           "--beta", "2", "--abs-tol", "1e-4", "--rel-tol", "1e-3",
                                           "--deterministic", "--plot"};
  auto with_out = [&](const fs::path& d) {
    auto a = common;
    a.push_back("--out");
    a.push_back(d.string());
    return a;
  };
  const auto d1 = scratch("det1"), d2 = scratch("det2");
  ::setenv("VANHOVE_THREADS", "1", 1);
  REQUIRE(vh(with_out(d1)).status == 0);
  ::setenv("VANHOVE_THREADS", "2", 1);
  REQUIRE(vh(with_out(d2)).status == 0);
  ::unsetenv("VANHOVE_THREADS");
  CHECK(slurp(d1 / "sigma2.csv") == slurp(d2 / "sigma2.csv"));
  const auto m1 = slurp(d1 / "sigma2.manifest.json"), m2 = slurp(d2 / "sigma2.manifest.json");
  // the output directory is part of the embedded config
  CHECK(json::parse(m1)["config"]["out"] == d1.string());
  auto j1 = json::parse(m1), j2 = json::parse(m2);
  j1["config"].erase("out");
  j2["config"].erase("out");
  CHECK(j1.dump() == j2.dump());
  CHECK_FALSE(j1.contains("wall_time_seconds"));
  CHECK(slurp(d1 / "sigma2.svg") == slurp(d2 / "sigma2.svg"));
  CHECK(slurp(d1 / "sigma2.svg").find("generated") == std::string::npos);
}

TEST_CASE("config file values are overridden by flags") {
  const auto dir = scratch("config");
  {
    std::ofstream f(dir / "run.json");
    f << R"({"beta_list": [5, 10], "name": "fromfile"})";
  }
  auto r = vh({"bubble-ph", "--config", (dir / "run.json").string(), "--out", dir.string()});
  REQUIRE(r.status == 0);
  CHECK(read_csv(dir / "fromfile.csv").size() == 3);
  r = vh({"bubble-ph", "--config", (dir / "run.json").string(), "--out", dir.string(), "--beta-list", "7"});
  REQUIRE(r.status == 0);
  const auto csv = read_csv(dir / "fromfile.csv");
  REQUIRE(csv.size() == 2);
  CHECK(std::stod(csv[1][0]) == 7.0);
  const auto m = json::parse(slurp(dir / "fromfile.manifest.json"));
  CHECK(m["config"]["beta_list"] == json::array({7.0}));
}

TEST_CASE("validation failures exit with status 2") {
  const auto dir = scratch("bad");
  auto r = vh({"sigma2", "--q0-spacing", "linear", "--q0-min", "-1", "--q0-max", "1", "--q0-points", "3",
               "--out", dir.string()});
  CHECK(r.status == 2);
  CHECK(r.err.find("ZeroFrequency") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "sigma2.csv"));
  CHECK(vh({"grad-check", "--beta-list", "2,-1", "--out", dir.string()}).status == 2);
  CHECK(vh({"bubble-ph", "--beta-list", "abc"}).status == 2);
  CHECK(vh({"dsigma-domega", "--abs-tol", "-1", "--out", dir.string()}).status == 2);
  CHECK(vh({"overlap", "--theta", "1.5", "--out", dir.string()}).status == 2);
  CHECK(vh({"sigma2", "--no-such-flag"}).status == 2);
  CHECK(vh({"no-such-command"}).status == 2);
  {
    std::ofstream f(dir / "unknown.json");
    f << R"({"betas": [1]})";
  }
  r = vh({"bubble-ph", "--config", (dir / "unknown.json").string()});
  CHECK(r.status == 2);
  CHECK(r.err.find("unknown key") != std::string::npos);
  {
    std::ofstream f(dir / "broken.json");
    f << "{ not json";
  }
  CHECK(vh({"bubble-ph", "--config", (dir / "broken.json").string()}).status == 2);
  CHECK(vh({"fit", "--out", dir.string()}).status == 2);
}

TEST_CASE("non-convergence exits with status 3 and still writes artifacts") {
  const auto dir = scratch("budget");
  const auto r = vh({"d2-xixi", "--max-evals", "60", "--q0-points", "5", "--out", dir.string()});
  CHECK(r.status == 3);
  CHECK(r.err.find("NotConverged") != std::string::npos);
  REQUIRE(fs::exists(dir / "d2-xixi.csv"));
  CHECK(json::parse(slurp(dir / "d2-xixi.manifest.json"))["converged"] == false);
}

TEST_CASE("fit command reproduces the sweep fit") {
  const auto dir = scratch("fit");
  REQUIRE(vh({"dsigma-domega", "--out", dir.string(), "--deterministic"}).status == 0);
  const auto sweep = json::parse(slurp(dir / "dsigma-domega.manifest.json"));
  REQUIRE(vh({"fit", "--input", (dir / "dsigma-domega.csv").string(), "--y-column", "im_d0_sigma2", "--out",
              dir.string()})
              .status == 0);
  const auto fit = json::parse(slurp(dir / "fit.manifest.json"));
  CHECK(fit["report"]["fit"]["a"].get<double>() ==
        doctest::Approx(sweep["report"]["fit"]["a"].get<double>()).epsilon(1e-12));
  CHECK(read_csv(dir / "fit.csv").size() == 10);
  CHECK(vh({"fit", "--input", (dir / "dsigma-domega.csv").string(), "--y-column", "nope"}).status == 2);
}

TEST_CASE("geometry commands") {
  const auto dir = scratch("geometry");
  REQUIRE(vh({"normal-form", "--out", dir.string()}).status == 0);
  const auto nf = read_csv(dir / "normal-form.csv");
  REQUIRE(nf.size() == 3);
  for (std::size_t i = 1; i < nf.size(); ++i) CHECK(std::stod(nf[i][7]) < 1e-6);
  REQUIRE(vh({"overlap", "--num-p", "20", "--j-min", "-8", "--out", dir.string(), "--plot"}).status == 0);
  CHECK(read_csv(dir / "overlap.csv").size() == 1 + 2 * 20 * 3);
  const auto m = json::parse(slurp(dir / "overlap.manifest.json"));
  CHECK(m["seeds"]["seed"] == 42);
  CHECK(m["report"]["has_fit"] == true);
}

TEST_CASE("sigma2 with the frequency-sum oracle") {
  const auto dir = scratch("oracle");
  const double beta = 2.0, q0 = std::numbers::pi / beta;
  const std::string q = std::to_string(q0);
  // not a Matsubara frequency to the required precision
  CHECK(vh({"sigma2", "--beta", "2", "--q0-min", q, "--q0-max", q, "--q0-points", "1", "--oracle-grid", "8",
            "--out", dir.string()})
            .status == 2);
  {
    std::ofstream f(dir / "o.json");
    f << json{{"q0_min", q0}, {"q0_max", q0}, {"q0_points", 1}, {"beta", beta}, {"oracle_grid", 12},
              {"oracle_cutoff", 100.0}, {"abs_tol", 1e-6}, {"rel_tol", 1e-5}}
             .dump();
  }
  REQUIRE(vh({"sigma2", "--config", (dir / "o.json").string(), "--out", dir.string()}).status == 0);
  const auto csv = read_csv(dir / "sigma2.csv");
  REQUIRE(csv.size() == 2);
  CHECK(csv[1][9] == "1");
}

TEST_CASE("the installed executable reports exit codes") {
  const std::string exe = VANHOVE_CLI_PATH;
  CHECK(shell_status(exe + " --help > /dev/null") == 0);
  CHECK(shell_status(exe + " sigma2 --bogus > /dev/null 2>&1") == 2);
  CHECK(shell_status(exe + " grad-check --q0 0 > /dev/null 2>&1") == 2);
}
