#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kqbh/cli.hpp"
#include "kqbh/report.hpp"
#include "support.hpp"

using namespace kqbh;
using namespace kqbh::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

std::filesystem::path scratch_dir() {
  static const std::filesystem::path dir = [] {
    auto d = std::filesystem::temp_directory_path() / ("kqbh_cli_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

// spawns the real binary; arguments are single-quoted for the shell
Run spawn(const std::vector<std::string>& args) {
  const auto dir = scratch_dir();
  std::string cmd = "'" KQBH_BINARY "'";
  for (const auto& a : args) cmd += " '" + a + "'";
  cmd += " > '" + (dir / "out").string() + "' 2> '" + (dir / "err").string() + "'";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(dir / "out"), slurp(dir / "err")};
}

int usage_code(const std::vector<std::string>& args, std::string* msg = nullptr) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  if (msg) *msg = err.str();
  return code;
}

}  // namespace

TEST_CASE("parse_args: verify") {
  const CliConfig c = parse_args({"verify", "--suite", "polar", "--samples", "1000", "--seed", "42", "--json", "-"});
  CHECK(c.command == Command::verify);
  CHECK(c.suite == "polar");
  CHECK(c.run.samples == 1000);
  CHECK(c.seed == 42);
  REQUIRE(c.json_out);
  CHECK(*c.json_out == "-");

  const CliConfig d = parse_args({"verify"});
  CHECK(d.suite == "all");
  CHECK(d.seed == 42);
  CHECK(d.run.samples == 1000);
  CHECK(d.run.tol_exact == 1e-10);
  CHECK(d.run.tol_fd == 1e-6);
  CHECK_FALSE(d.json_out);

  const CliConfig e = parse_args({"verify", "--tol-exact", "1e-9", "--tol-fd", "2e-6"});
  CHECK(e.run.tol_exact == 1e-9);
  CHECK(e.run.tol_fd == 2e-6);
}

TEST_CASE("parse_args: trajectory and point-report") {
  const CliConfig t =
      parse_args({"trajectory", "--chart", "polar", "--at", "1,0,0,1.2", "--steps", "50000", "--h", "0.001"});
  CHECK(t.command == Command::trajectory);
  CHECK(t.chart == ChartId::polar);
  REQUIRE(t.at);
  CHECK(*t.at == Vec4(1, 0, 0, 1.2));
  CHECK(t.integrator.steps == 50000);
  CHECK(t.integrator.h == 0.001);
  CHECK(t.integrator.method == Method::implicit_midpoint);
  CHECK(t.g == 1.0);
  CHECK(t.out == "-");

  const CliConfig r = parse_args({"trajectory", "--chart", "parabolic", "--at", "1, 1, 1, 0", "--method", "rk4"});
  CHECK(r.chart == ChartId::parabolic);
  CHECK(r.integrator.method == Method::rk4);
  CHECK(r.integrator.h == 1e-3);

  const CliConfig p = parse_args({"point-report", "--chart", "parabolic", "--at", "1,1,1,0", "--g", "2", "--alpha0", "0.5"});
  CHECK(p.command == Command::point_report);
  CHECK(p.g == 2.0);
  CHECK(p.alpha0 == 0.5);
}

TEST_CASE("usage errors name the offending flag") {
  const std::vector<std::pair<std::vector<std::string>, std::string>> cases{
      {{"verify", "--suite", "bogus"}, "--suite"},
      {{"verify", "--samples", "0"}, "--samples"},
      {{"verify", "--samples", "many"}, "--samples"},
      {{"verify", "--tol-exact", "-1"}, "--tol-exact"},
      {{"verify", "--tol-fd", "0"}, "--tol-fd"},
      {{"verify", "--seed", "x"}, "--seed"},
      {{"trajectory", "--at", "1,0,0"}, "--at"},
      {{"trajectory", "--at", "1,0,zero,1"}, "--at"},
      {{"trajectory", "--at", "1,0,0,1", "--chart", "cartesian"}, "--chart"},
      {{"trajectory", "--at", "1,0,0,1", "--h", "0"}, "--h"},
      {{"trajectory", "--at", "1,0,0,1", "--steps", "-3"}, "--steps"},
      {{"trajectory", "--at", "1,0,0,1", "--method", "euler"}, "--method"},
      {{"trajectory", "--at", "1,0,0,1", "--g", "-1"}, "--g"},
      {{"trajectory"}, "--at"},
      {{"point-report", "--at", "1,0,0,1", "--alpha0", "0"}, "--alpha0"},
  };
  for (const auto& [args, flag] : cases) {
    std::string msg;
    CHECK_MESSAGE(usage_code(args, &msg) == kExitUsage, flag);
    CHECK_MESSAGE(msg.find(flag) != std::string::npos, msg);
  }
  try {
    parse_args({"verify", "--suite", "bogus"});
    FAIL("expected UsageError");
  } catch (const UsageError& e) {
    CHECK(e.flag() == "--suite");
  }
  CHECK(usage_code({}) == kExitUsage);
  CHECK(usage_code({"frobnicate"}) == kExitUsage);
  CHECK(usage_code({"verify", "--unknown"}) == kExitUsage);
}

TEST_CASE("help exits 0") {
  std::ostringstream out, err;
  CHECK(run({"--help"}, out, err) == 0);
  CHECK(out.str().find("verify") != std::string::npos);
  std::ostringstream out2;
  CHECK(run({"verify", "--help"}, out2, err) == 0);
  CHECK(out2.str().find("--tol-fd") != std::string::npos);
}

TEST_CASE("CSV numbers are shortest round-trip decimals") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-0.25) == "-0.25");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(format_double(1e-300) == "1e-300");
}

TEST_CASE("binary: verify exit codes and JSON on stdout") {
  const Run ok = spawn({"verify", "--suite", "calculus", "--samples", "100", "--json", "-"});
  CHECK(ok.code == 0);
  const SuiteReport rep = parse_report(ok.out);
  CHECK(rep.suite == "calculus");
  CHECK(rep.seed == 42);
  CHECK(rep.config.samples == 100);
  CHECK(rep.ok());

  // the polar suite carries the failing kernel-invariance check
  const Run bad = spawn({"verify", "--suite", "polar", "--samples", "100"});
  CHECK(bad.code == 1);
  CHECK(bad.out.find("fail  polar.kernel.invariance ") != std::string::npos);

  const Run usage = spawn({"verify", "--suite", "bogus"});
  CHECK(usage.code == 2);
  CHECK(usage.err.find("--suite") != std::string::npos);
}

TEST_CASE("binary: JSON to a file") {
  const auto path = scratch_dir() / "report.json";
  const Run r = spawn({"verify", "--suite", "calculus", "--samples", "20", "--seed", "3", "--json", path.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("checks:") != std::string::npos);
  const SuiteReport rep = parse_report(slurp(path));
  CHECK(rep.seed == 3);
}

TEST_CASE("binary: trajectory CSV") {
  const auto path = scratch_dir() / "traj.csv";
  const Run r = spawn({"trajectory", "--chart", "polar", "--at", "1,0,0,1.2", "--steps", "50000", "--h", "0.001", "--out",
                       path.string()});
  REQUIRE(r.code == 0);
  std::ifstream f(path);
  std::string line;
  std::getline(f, line);
  CHECK(line == "t,q1,q2,p1,p2,H,J3,J4,pphi");
  double lo = 1e300, hi = -1e300, j0 = 0;
  int rows = 0;
  while (std::getline(f, line)) {
    std::vector<double> v;
    std::stringstream s(line);
    std::string cell;
    while (std::getline(s, cell, ',')) v.push_back(std::stod(cell));
    REQUIRE(v.size() == 9);
    if (rows == 0) {
      CHECK(v[0] == 0.0);
      CHECK(v[4] == 1.2);
      j0 = v[6];
    }
    lo = std::min(lo, v[6]);
    hi = std::max(hi, v[6]);
    ++rows;
  }
  CHECK(rows == 50001);
  CHECK(hi - lo < 1e-6 * (1 + std::abs(j0)));
}

TEST_CASE("binary: point report") {
  const Run r = spawn({"point-report", "--chart", "parabolic", "--at", "1,1,1,0", "--g", "1"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["observables"]["K4"].get<double>() == doctest::Approx(0.5));
  CHECK(j["observables"]["H"].get<double>() == doctest::Approx(-0.25));
  CHECK(j["kernel_basis"].size() == 2);
  CHECK(j["audit"]["beta24"].get<double>() > 1e-8);
  CHECK(j["recursions"].contains("spectrum_R_ab1"));

  const Run p = spawn({"point-report", "--chart", "polar", "--at", "1,1.5707963267948966,0.5,1"});
  REQUIRE(p.code == 0);
  const auto q = nlohmann::json::parse(p.out);
  CHECK(q["observables"]["H"].get<double>() == doctest::Approx(-0.375));
  CHECK(q["observables"]["J4"].get<double>() == doctest::Approx(-0.5));
  CHECK(q["audit"]["recursions"].get<double>() < 1e-10);
  CHECK(q["oscillator"]["alpha0"] == 1.0);
}

TEST_CASE("binary: runtime errors exit 3 with a diagnostic") {
  const Run origin = spawn({"point-report", "--chart", "polar", "--at", "0,0,0,1"});
  CHECK(origin.code == 3);
  CHECK(origin.err.find("below guard") != std::string::npos);
  CHECK(origin.out.empty());

  // a huge step makes the fixed-point iteration diverge
  const Run diverge = spawn({"trajectory", "--chart", "polar", "--at", "0.5,0,0,0.3", "--h", "5", "--steps", "10"});
  CHECK(diverge.code == 3);
  CHECK(diverge.err.find("step") != std::string::npos);

  const Run unwritable = spawn({"trajectory", "--at", "1,0,0,1", "--steps", "1", "--out", "/nonexistent/dir/x.csv"});
  CHECK(unwritable.code == 3);
}
