#include <limits>

#include "kqbh/report.hpp"
#include "support.hpp"

using namespace kqbh;
using nlohmann::ordered_json;

namespace {

SuiteReport synthetic() {
  SuiteReport rep;
  rep.suite = "flow";
  rep.seed = 18446744073709551615ULL;
  rep.config.samples = 7;
  rep.config.tol_exact = 1e-11;
  rep.config.tol_fd = 2.5e-7;
  CheckReport a;
  a.id = "x.one";
  a.ref = "a = b";
  a.kind = "trajectory";
  a.samples_run = 3;
  a.max_abs_residual = std::numeric_limits<double>::infinity();
  a.tolerance = 1e-8;
  a.status = Status::fail;
  a.notes = {"error: NoConvergence", "unicode λ"};
  CheckReport b;
  b.id = "x.two";
  b.ref = "c = d";
  b.kind = "pointwise";
  b.samples_run = 100;
  b.max_abs_residual = 0.1 + 0.2;  // not exactly representable as a short decimal
  b.tolerance = 1.0;
  b.pass = true;
  b.status = Status::pass;
  b.worst_point = PhasePoint::make(ChartId::polar, 1.0 / 3.0, 6.0, -0.0, 1e-300);
  rep.checks = {a, b};
  rep.passed = 1;
  rep.failed = 1;
  rep.wall_time = 0.25;
  return rep;
}

}  // namespace

TEST_CASE("top-level layout") {
  const ordered_json j = report_to_json(synthetic());
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"schema_version", "suite", "seed", "config", "checks", "summary", "wall_time"});
  CHECK(j["schema_version"] == 1);
  CHECK(j["config"]["samples"] == 7);
  CHECK(j["summary"]["total"] == 2);
  CHECK(j["summary"]["failed"] == 1);
  const auto& c = j["checks"][0];
  for (const char* k : {"id", "paper_ref", "kind", "samples_run", "residual", "tolerance", "pass", "status", "worst_point", "notes"})
    CHECK_MESSAGE(c.contains(k), k);
  CHECK(c["residual"].is_null());
  CHECK(c["worst_point"].is_null());
  CHECK(j["checks"][1]["worst_point"]["chart"] == "polar");
  CHECK(j["checks"][1]["worst_point"]["coords"].size() == 4);
}

TEST_CASE("round trip through text") {
  const SuiteReport rep = synthetic();
  const std::string text = serialize(rep);
  const SuiteReport back = parse_report(text);
  CHECK(back == rep);
  CHECK(back.wall_time == rep.wall_time);
  CHECK(back.checks[1].max_abs_residual == 0.1 + 0.2);
  CHECK(serialize(back) == text);
}

TEST_CASE("round trip of a real suite report") {
  RunConfig cfg;
  cfg.samples = 50;
  const SuiteReport rep = run_suite("parabolic", 3, cfg);
  const SuiteReport back = parse_report(serialize(rep));
  CHECK(back == rep);
}

TEST_CASE("malformed reports are rejected") {
  CHECK_THROWS_AS(parse_report("{"), std::runtime_error);
  CHECK_THROWS_AS(parse_report("{}"), std::runtime_error);
  ordered_json j = report_to_json(synthetic());
  j["schema_version"] = 2;
  CHECK_THROWS_AS(report_from_json(j), std::runtime_error);
  j = report_to_json(synthetic());
  j["summary"]["total"] = 5;
  CHECK_THROWS_AS(report_from_json(j), std::runtime_error);
  j = report_to_json(synthetic());
  j["checks"][0]["status"] = "maybe";
  CHECK_THROWS(report_from_json(j));
}
