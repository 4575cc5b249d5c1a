#include "kqbh/report.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace kqbh {

using nlohmann::ordered_json;

namespace {

ordered_json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

double number_from(const ordered_json& j) {
  if (j.is_null()) return std::numeric_limits<double>::infinity();
  return j.get<double>();
}

}  // namespace

ordered_json point_to_json(const PhasePoint& p) {
  ordered_json j;
  j["chart"] = std::string(to_string(p.chart()));
  j["coords"] = {p.q1(), p.q2(), p.p1(), p.p2()};
  return j;
}

PhasePoint point_from_json(const ordered_json& j) {
  const auto& c = j.at("coords");
  if (!c.is_array() || c.size() != 4) throw std::runtime_error("worst_point.coords must hold four numbers");
  return PhasePoint::make(chart_from_string(j.at("chart").get<std::string>()), c[0].get<double>(), c[1].get<double>(),
                          c[2].get<double>(), c[3].get<double>());
}

ordered_json report_to_json(const SuiteReport& rep) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["suite"] = rep.suite;
  j["seed"] = rep.seed;
  j["config"] = {{"samples", rep.config.samples}, {"tol_exact", rep.config.tol_exact}, {"tol_fd", rep.config.tol_fd}};
  ordered_json checks = ordered_json::array();
  for (const CheckReport& c : rep.checks) {
    ordered_json e;
    e["id"] = c.id;
    e["paper_ref"] = c.ref;
    e["kind"] = c.kind;
    e["samples_run"] = c.samples_run;
    e["residual"] = number(c.max_abs_residual);
    e["tolerance"] = c.tolerance;
    e["pass"] = c.pass;
    e["status"] = std::string(to_string(c.status));
    e["worst_point"] = c.worst_point ? point_to_json(*c.worst_point) : ordered_json(nullptr);
    e["notes"] = c.notes;
    checks.push_back(std::move(e));
  }
  j["checks"] = std::move(checks);
  j["summary"] = {{"total", rep.checks.size()}, {"passed", rep.passed}, {"failed", rep.failed}, {"flagged", rep.flagged}};
  j["wall_time"] = rep.wall_time;
  return j;
}

SuiteReport report_from_json(const ordered_json& j) {
  if (j.at("schema_version").get<int>() != kSchemaVersion) throw std::runtime_error("unsupported schema_version");
  SuiteReport rep;
  rep.suite = j.at("suite").get<std::string>();
  rep.seed = j.at("seed").get<std::uint64_t>();
  const auto& cfg = j.at("config");
  rep.config.samples = cfg.at("samples").get<int>();
  rep.config.tol_exact = cfg.at("tol_exact").get<double>();
  rep.config.tol_fd = cfg.at("tol_fd").get<double>();
  for (const auto& e : j.at("checks")) {
    CheckReport c;
    c.id = e.at("id").get<std::string>();
    c.ref = e.at("paper_ref").get<std::string>();
    c.kind = e.at("kind").get<std::string>();
    c.samples_run = e.at("samples_run").get<int>();
    c.max_abs_residual = number_from(e.at("residual"));
    c.tolerance = e.at("tolerance").get<double>();
    c.pass = e.at("pass").get<bool>();
    c.status = status_from_string(e.at("status").get<std::string>());
    if (!e.at("worst_point").is_null()) c.worst_point = point_from_json(e.at("worst_point"));
    c.notes = e.at("notes").get<std::vector<std::string>>();
    rep.checks.push_back(std::move(c));
  }
  const auto& s = j.at("summary");
  rep.passed = s.at("passed").get<int>();
  rep.failed = s.at("failed").get<int>();
  rep.flagged = s.at("flagged").get<int>();
  if (s.at("total").get<std::size_t>() != rep.checks.size()) throw std::runtime_error("summary.total does not match checks");
  rep.wall_time = j.value("wall_time", 0.0);
  return rep;
}

std::string serialize(const SuiteReport& rep) { return report_to_json(rep).dump(2) + "\n"; }

SuiteReport parse_report(const std::string& text) {
  try {
    return report_from_json(ordered_json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("malformed report: ") + e.what());
  }
}

}  // namespace kqbh
