#include "kqbh/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "kqbh/parabolic.hpp"
#include "kqbh/polar.hpp"
#include "kqbh/report.hpp"

namespace kqbh::cli {

using nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

namespace {

Vec4 parse_point(const std::string& text) {
  std::vector<double> v;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    const std::string item = text.substr(start, end - start);
    double x = 0.0;
    const char* first = item.data();
    const char* last = item.data() + item.size();
    while (first < last && *first == ' ') ++first;
    if (first < last && *first == '+') ++first;
    const auto res = std::from_chars(first, last, x);
    if (res.ec != std::errc() || res.ptr != last || !std::isfinite(x)) {
      throw UsageError("--at", "'" + item + "' is not a finite number");
    }
    v.push_back(x);
    start = end + 1;
  }
  if (v.size() != 4) throw UsageError("--at", "expected four comma-separated values q1,q2,p1,p2");
  return {v[0], v[1], v[2], v[3]};
}

ChartId parse_chart(const std::string& name) {
  if (name == "polar") return ChartId::polar;
  if (name == "parabolic") return ChartId::parabolic;
  throw UsageError("--chart", "expected polar or parabolic, got '" + name + "'");
}

void require_positive(double v, const char* flag) {
  if (!(v > 0.0) || !std::isfinite(v)) throw UsageError(flag, "must be positive and finite");
}

std::string flag_in(const std::string& msg) {
  static const std::regex re("--[a-z][a-z-]*");
  std::smatch m;
  if (std::regex_search(msg, m, re)) return m.str();
  return {};
}

}  // namespace

CliConfig parse_args(const std::vector<std::string>& args) {
  CliConfig cfg;
  CLI::App app{"Kepler quasi-bi-Hamiltonian structures: verification suites, trajectories and point reports", "kqbh"};
  app.require_subcommand(1, 1);

  std::string json_out;
  std::string chart = "polar";
  std::string at;
  std::string method = "implicit_midpoint";

  auto* verify = app.add_subcommand("verify", "run a check suite and report residuals");
  verify->add_option("--suite", cfg.suite, "calculus, polar, parabolic, flow or all")
      ->check(CLI::IsMember(suite_names()))
      ->capture_default_str();
  verify->add_option("--samples", cfg.run.samples, "sample points per full-size check")->capture_default_str();
  verify->add_option("--seed", cfg.seed, "seed of the SplitMix64 stream")->capture_default_str();
  verify->add_option("--tol-exact", cfg.run.tol_exact, "tolerance of exact-gradient identities")->capture_default_str();
  verify->add_option("--tol-fd", cfg.run.tol_fd, "tolerance of difference-assisted identities")->capture_default_str();
  verify->add_option("--json", json_out, "write the JSON report to PATH ('-' for stdout)");

  auto* traj = app.add_subcommand("trajectory", "integrate the Kepler flow and write CSV");
  traj->set_help_flag("--help", "print this help message and exit");  // -h would clash with --h
  traj->add_option("--chart", chart, "polar or parabolic")->capture_default_str();
  traj->add_option("--at", at, "initial point q1,q2,p1,p2")->required();
  traj->add_option("--g", cfg.g, "coupling, in the convention of the chart")->capture_default_str();
  traj->add_option("--h", cfg.integrator.h, "step size")->capture_default_str();
  traj->add_option("--steps", cfg.integrator.steps, "number of steps")->capture_default_str();
  traj->add_option("--method", method, "implicit_midpoint or rk4")->capture_default_str();
  traj->add_option("--out", cfg.out, "CSV path ('-' for stdout)")->capture_default_str();

  auto* point = app.add_subcommand("point-report", "dump every structure at one point as JSON");
  point->add_option("--chart", chart, "polar or parabolic")->capture_default_str();
  point->add_option("--at", at, "point q1,q2,p1,p2")->required();
  point->add_option("--g", cfg.g, "coupling, in the convention of the chart")->capture_default_str();
  point->add_option("--alpha0", cfg.alpha0, "oscillator frequency (polar chart)")->capture_default_str();
  point->add_option("--json", cfg.out, "output path ('-' for stdout)")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    cfg.command = Command::help;
    const CLI::App* sub = nullptr;
    for (const auto* s : {verify, traj, point}) {
      if (s->parsed()) sub = s;
    }
    cfg.help_text = sub ? sub->help() : app.help();
    return cfg;
  } catch (const CLI::ParseError& e) {
    throw UsageError(flag_in(e.what()), e.what());
  }

  if (verify->parsed()) {
    cfg.command = Command::verify;
    if (cfg.run.samples < 1) throw UsageError("--samples", "must be at least 1");
    require_positive(cfg.run.tol_exact, "--tol-exact");
    require_positive(cfg.run.tol_fd, "--tol-fd");
    if (verify->count("--json") > 0) {
      if (json_out.empty()) throw UsageError("--json", "empty path");
      cfg.json_out = json_out;
    }
    return cfg;
  }

  cfg.command = traj->parsed() ? Command::trajectory : Command::point_report;
  cfg.chart = parse_chart(chart);
  cfg.at = parse_point(at);
  require_positive(cfg.g, "--g");
  if (cfg.out.empty()) throw UsageError(traj->parsed() ? "--out" : "--json", "empty path");
  if (cfg.command == Command::trajectory) {
    require_positive(cfg.integrator.h, "--h");
    if (cfg.integrator.steps < 0) throw UsageError("--steps", "must be non-negative");
    try {
      cfg.integrator.method = method_from_string(method);
    } catch (const std::invalid_argument& e) {
      throw UsageError("--method", e.what());
    }
  } else {
    require_positive(cfg.alpha0, "--alpha0");
  }
  return cfg;
}

namespace {

// Writes to the stream or the file named by path ("-" is out).
template <typename F>
void with_output(const std::string& path, std::ostream& out, F&& write) {
  if (path == "-") {
    write(out);
    out.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  write(f);
  f.close();
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

void print_summary(const SuiteReport& rep, std::ostream& out) {
  for (const CheckReport& c : rep.checks) {
    out << to_string(c.status) << "  " << c.id << "  residual " << format_double(c.max_abs_residual) << " tol "
        << format_double(c.tolerance) << "\n";
    if (c.status != Status::pass) {
      for (const auto& n : c.notes) out << "      " << n << "\n";
    }
  }
  out << rep.checks.size() << " checks: " << rep.passed << " passed, " << rep.failed << " failed, " << rep.flagged
      << " flagged (" << format_double(rep.wall_time) << " s)\n";
}

ordered_json cjson(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

ordered_json vec_json(const CVec4& v) {
  ordered_json a = ordered_json::array();
  for (int k = 0; k < 4; ++k) a.push_back(cjson(v[k]));
  return a;
}

ordered_json vec_json(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }

ordered_json mat_json(const CMat4& m) {
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < 4; ++i) {
    ordered_json row = ordered_json::array();
    for (int j = 0; j < 4; ++j) row.push_back(cjson(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json spectrum_json(const Spectrum& s) {
  ordered_json e = ordered_json::array();
  for (const Complex& z : s.poly.elementary) e.push_back(cjson(z));
  ordered_json ev = ordered_json::array();
  for (const Complex& z : s.eigenvalues) ev.push_back(cjson(z));
  return {{"elementary", e}, {"eigenvalues", ev}, {"det", cjson(s.poly.det())}};
}

ordered_json basis_json(const CMat4& omega) {
  ordered_json b = ordered_json::array();
  for (const CVec4& v : kernel_basis(omega)) b.push_back(vec_json(v));
  return b;
}

ordered_json polar_report(const PhasePoint& p, double g, double alpha0) {
  ordered_json j;
  const polar::Observables o = polar::observables(p, g);
  j["observables"] = {{"H", o.H},       {"lambda", o.lambda}, {"M_r", cjson(o.M_r)}, {"N_phi", cjson(o.N_phi)},
                      {"J2", o.J2},     {"J34", cjson(o.J34)}, {"J3", o.J3},        {"J4", o.J4},
                      {"J4_displayed", polar::j4_displayed(p, g)}, {"modM2", o.modM2}};
  j["gamma"] = vec_json(polar::gamma(p, g));
  const polar::YFields y = polar::y_fields(p, g);
  j["fields"] = {{"Y_r", vec_json(y.Y_r)}, {"Y_phi", vec_json(y.Y_phi)}, {"Y", vec_json(y.Y)},
                 {"Yprime", vec_json(y.Yprime)}, {"Y34", vec_json(y.Y34)}, {"Y3", vec_json(y.Y3)}, {"Y4", vec_json(y.Y4)}};
  const CMat4 omega = polar::omega_field(g).matrix(p);
  j["forms"] = {{"Omega", mat_json(omega)},
                {"Omega1", mat_json(polar::omega1_field(g).matrix(p))},
                {"Omega2", mat_json(polar::omega2_field(g).matrix(p))}};
  j["kernel_basis"] = basis_json(omega);
  ordered_json audit = {{"Y_fields", y.audit_residual}, {"forms", polar::forms(p, g).audit_residual}};
  try {
    const auto [z1, z2] = polar::kernel(p, g);
    j["kernel_printed"] = {{"Z1", vec_json(z1)}, {"Z2", vec_json(z2)}};
  } catch (const DegenerateLocus& e) {
    j["kernel_printed"] = {{"degenerate", e.what()}};
  }
  const polar::Recursions r = polar::recursions(p, g);
  j["recursions"] = {{"R1", mat_json(r.R1.cast<Complex>())},
                     {"R2", mat_json(r.R2.cast<Complex>())},
                     {"spectrum_R1", spectrum_json(r.spectrum1)},
                     {"spectrum_R2", spectrum_json(r.spectrum2)}};
  audit["recursions"] = r.audit_residual;
  j["audit"] = audit;
  const polar::OscillatorObservables osc = polar::oscillator_observables(p, alpha0);
  j["oscillator"] = {{"alpha0", alpha0}, {"H", osc.H}, {"M_r", cjson(osc.M_r)}, {"F", cjson(osc.F)}};
  return j;
}

ordered_json parabolic_report(const PhasePoint& p, double g) {
  ordered_json j;
  const parabolic::Observables o = parabolic::observables(p, g);
  j["observables"] = {{"H", o.H},   {"lambda", o.lambda}, {"J", o.J},   {"Px", o.Px},
                      {"Py", o.Py}, {"Rx", o.Rx},         {"M_a", cjson(o.M_a)}, {"M_b", cjson(o.M_b)},
                      {"K34", cjson(o.K34)}, {"K3", o.K3}, {"K4", o.K4}, {"K3_displayed", o.K3_displayed},
                      {"modA2", o.modA2}, {"modB2", o.modB2}};
  j["gamma"] = vec_json(parabolic::gamma(p, g));
  j["gamma_printed"] = vec_json(parabolic::gamma_printed(p, g));
  const parabolic::ZFields z = parabolic::z_fields(p, g);
  j["fields"] = {{"Z_a", vec_json(z.Z_a)}, {"Z_b", vec_json(z.Z_b)}, {"Z", vec_json(z.Z)},
                 {"Zprime", vec_json(z.Zprime)}, {"Z34", vec_json(z.Z34)}};
  const CMat4 omega = parabolic::omega_field(g).matrix(p);
  j["forms"] = {{"Omega_ab", mat_json(omega)},
                {"Omega_ab1", mat_json(parabolic::omega1_field(g).matrix(p))},
                {"Omega_ab2", mat_json(parabolic::omega2_field(g).matrix(p))}};
  j["kernel_basis"] = basis_json(omega);
  ordered_json audit = {{"Z_a", z.audit_a}, {"Z_b", z.audit_b},
                        {"gamma", max_abs(Vec4(parabolic::gamma(p, g) - parabolic::gamma_printed(p, g)))}};
  for (const auto& a : parabolic::forms(p, g).audit) audit[a.name] = a.residual;
  j["audit"] = audit;
  try {
    const parabolic::Recursions r = parabolic::recursions(p, g);
    j["recursions"] = {{"R_ab1", mat_json(r.R1)},
                       {"R_ab2", mat_json(r.R2)},
                       {"spectrum_R_ab1", spectrum_json(r.spectrum1)},
                       {"spectrum_R_ab2", spectrum_json(r.spectrum2)}};
  } catch (const DegenerateLocus& e) {
    j["recursions"] = {{"degenerate", e.what()}};
  }
  return j;
}

}  // namespace

std::vector<std::string> trajectory_columns(ChartId chart) {
  if (chart == ChartId::polar) return {"t", "q1", "q2", "p1", "p2", "H", "J3", "J4", "pphi"};
  return {"t", "q1", "q2", "p1", "p2", "H", "K3", "K4", "Rx"};
}

int execute(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  (void)err;
  switch (cfg.command) {
    case Command::help:
      out << cfg.help_text;
      return kExitOk;

    case Command::verify: {
      const SuiteReport rep = run_suite(cfg.suite, cfg.seed, cfg.run);
      if (cfg.json_out) {
        with_output(*cfg.json_out, out, [&](std::ostream& o) { o << serialize(rep); });
        if (*cfg.json_out != "-") print_summary(rep, out);
      } else {
        print_summary(rep, out);
      }
      return rep.ok() ? kExitOk : kExitCheckFailure;
    }

    case Command::trajectory: {
      const PhasePoint p0 = PhasePoint::make(cfg.chart, *cfg.at);
      ScalarField h;
      std::vector<ScalarField> monitors;
      if (cfg.chart == ChartId::polar) {
        h = polar::hamiltonian(cfg.g);
        monitors = {h, polar::j3(cfg.g), polar::j4(cfg.g), polar::angular_momentum()};
      } else {
        h = parabolic::hamiltonian(cfg.g);
        monitors = {h, parabolic::k3(cfg.g), parabolic::k4(cfg.g), parabolic::rx(cfg.g)};
      }
      const Trajectory t = integrate(h, p0, cfg.integrator, monitors);
      with_output(cfg.out, out, [&](std::ostream& o) {
        const auto cols = trajectory_columns(cfg.chart);
        for (std::size_t k = 0; k < cols.size(); ++k) o << (k ? "," : "") << cols[k];
        o << "\n";
        std::string line;
        for (std::size_t i = 0; i < t.times.size(); ++i) {
          line = format_double(t.times[i]);
          for (int k = 0; k < 4; ++k) line += "," + format_double(t.states[i][k]);
          for (double m : t.rows[i]) line += "," + format_double(m);
          o << line << "\n";
        }
      });
      return kExitOk;
    }

    case Command::point_report: {
      const PhasePoint p = PhasePoint::make(cfg.chart, *cfg.at);
      ordered_json j;
      j["chart"] = std::string(to_string(cfg.chart));
      j["point"] = vec_json(p.coords());
      j["g"] = cfg.g;
      const ordered_json body = cfg.chart == ChartId::polar ? polar_report(p, cfg.g, cfg.alpha0) : parabolic_report(p, cfg.g);
      for (const auto& [k, v] : body.items()) j[k] = v;
      with_output(cfg.out, out, [&](std::ostream& o) { o << j.dump(2) << "\n"; });
      return kExitOk;
    }
  }
  return kExitRuntime;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  try {
    cfg = parse_args(args);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
  try {
    return execute(cfg, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace kqbh::cli
