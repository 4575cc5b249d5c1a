#include "kqbh/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <charconv>
#include <thread>

namespace kqbh {

std::uint64_t SplitMix64::mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

double in_range(SplitMix64& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

double signed_range(SplitMix64& rng, double lo, double hi) {
  const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
  return sign * in_range(rng, lo, hi);
}

PhasePoint candidate(DomainId id, SplitMix64& rng) {
  if (id == DomainId::polar) {
    const double r = in_range(rng, 0.5, 3.0);
    const double phi = in_range(rng, 0.0, 2.0 * std::numbers::pi);
    const double pr = in_range(rng, -2.0, 2.0);
    const double pphi = signed_range(rng, 0.3, 2.0);
    return PhasePoint::make(ChartId::polar, r, phi, pr, pphi);
  }
  const double a = signed_range(rng, 0.5, 2.0);
  const double b = signed_range(rng, 0.5, 2.0);
  const double pa = in_range(rng, -2.0, 2.0);
  const double pb = in_range(rng, -2.0, 2.0);
  return PhasePoint::make(ChartId::parabolic, a, b, pa, pb);
}

bool base_excluded(DomainId id, const PhasePoint& p) {
  if (id == DomainId::parabolic) return std::abs(p.q1() * p.p2() - p.q2() * p.p1()) < 0.1;
  return false;
}

}  // namespace

std::vector<PhasePoint> sample_points(const SampleDomain& domain, std::uint64_t seed, int count) {
  if (count < 1) throw std::invalid_argument("sample count must be positive");
  SplitMix64 rng(seed);
  std::vector<PhasePoint> out;
  out.reserve(static_cast<std::size_t>(count));
  const long budget = 100L * count;
  long drawn = 0;
  while (static_cast<int>(out.size()) < count) {
    if (drawn >= budget) {
      throw DomainExhausted("accepted " + std::to_string(out.size()) + " of " + std::to_string(drawn) +
                            " candidates; rejection rate above 99%");
    }
    ++drawn;
    const PhasePoint p = candidate(domain.id, rng);
    if (base_excluded(domain.id, p)) continue;
    if (domain.exclude && domain.exclude(p)) continue;
    out.push_back(p);
  }
  return out;
}

std::string_view to_string(CheckKind k) {
  switch (k) {
    case CheckKind::pointwise:
      return "pointwise";
    case CheckKind::trajectory:
      return "trajectory";
    case CheckKind::audit:
      return "audit";
    case CheckKind::witness:
      return "witness";
  }
  return "pointwise";
}

std::string_view to_string(Tier t) {
  switch (t) {
    case Tier::exact:
      return "exact";
    case Tier::fd:
      return "fd";
    case Tier::strict:
      return "strict";
    case Tier::audit:
      return "audit";
    case Tier::custom:
      return "custom";
  }
  return "custom";
}

std::string_view to_string(Status s) {
  switch (s) {
    case Status::pass:
      return "pass";
    case Status::fail:
      return "fail";
    case Status::flagged:
      return "flagged";
  }
  return "fail";
}

Status status_from_string(std::string_view s) {
  if (s == "pass") return Status::pass;
  if (s == "flagged") return Status::flagged;
  if (s == "fail") return Status::fail;
  throw std::invalid_argument("unknown status '" + std::string(s) + "'");
}

double tolerance_for(const CheckSpec& spec, const RunConfig& cfg) {
  switch (spec.tier) {
    case Tier::exact:
      return cfg.tol_exact;
    case Tier::fd:
      return cfg.tol_fd;
    case Tier::strict:
      return 1e-12;
    case Tier::audit:
      return 1e-8;
    case Tier::custom:
      return spec.custom_tolerance;
  }
  return spec.custom_tolerance;
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  return a.samples == b.samples && a.tol_exact == b.tol_exact && a.tol_fd == b.tol_fd;
}

bool operator==(const SuiteReport& a, const SuiteReport& b) {
  return a.suite == b.suite && a.seed == b.seed && a.config == b.config && a.checks == b.checks &&
         a.passed == b.passed && a.failed == b.failed && a.flagged == b.flagged;
}

namespace {

std::string format_number(double v) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 3);
  return std::string(buf, r.ptr);
}

// NaN counts as worse than anything
double rank(double r) { return std::isnan(r) ? std::numeric_limits<double>::infinity() : r; }

void keep_max(std::vector<std::pair<std::string, double>>& into, const std::string& name, double v) {
  auto it = std::find_if(into.begin(), into.end(), [&](const auto& p) { return p.first == name; });
  if (it == into.end()) {
    into.emplace_back(name, v);
  } else {
    it->second = std::max(rank(it->second), rank(v));
  }
}

struct Sweep {
  double worst = -1.0;
  std::size_t worst_index = 0;
  std::vector<std::pair<std::string, double>> part_max;
  std::optional<std::pair<std::size_t, std::string>> first_error;
};

Sweep sweep(const CheckSpec& spec, const std::vector<PhasePoint>& pts, std::size_t begin, std::size_t end) {
  Sweep s;
  s.worst_index = begin;
  for (std::size_t i = begin; i < end; ++i) {
    Eval e;
    try {
      e = spec.pointwise(pts[i]);
    } catch (const std::exception& ex) {
      e.residual = std::numeric_limits<double>::infinity();
      if (!s.first_error) s.first_error = {i, ex.what()};
    }
    if (rank(e.residual) > rank(s.worst)) {
      s.worst = e.residual;
      s.worst_index = i;
    }
    for (const auto& [name, v] : e.parts) keep_max(s.part_max, name, v);
  }
  return s;
}

// max with ties resolved towards the lower index, so the result does not
// depend on how samples were split
void merge(Sweep& into, const Sweep& from) {
  if (rank(from.worst) > rank(into.worst) ||
      (rank(from.worst) == rank(into.worst) && from.worst_index < into.worst_index)) {
    into.worst = from.worst;
    into.worst_index = from.worst_index;
  }
  for (const auto& [name, v] : from.part_max) keep_max(into.part_max, name, v);
  if (from.first_error && (!into.first_error || from.first_error->first < into.first_error->first)) {
    into.first_error = from.first_error;
  }
}

}  // namespace

CheckReport run_check(const CheckSpec& spec, std::uint64_t seed, const RunConfig& cfg) {
  if (cfg.samples < 1) throw std::invalid_argument("samples must be at least 1");
  CheckReport rep;
  rep.id = spec.id;
  rep.ref = spec.ref;
  rep.kind = std::string(to_string(spec.kind));
  rep.tolerance = tolerance_for(spec, cfg);
  if (!spec.note.empty()) rep.notes.push_back(spec.note);

  if (spec.single) {
    Outcome out;
    try {
      out = spec.single();
    } catch (const std::exception& ex) {
      out.residual = std::numeric_limits<double>::infinity();
      out.notes.push_back(std::string("error: ") + ex.what());
    }
    rep.samples_run = out.samples_run;
    rep.max_abs_residual = out.residual;
    rep.worst_point = out.worst_point;
    rep.notes.insert(rep.notes.end(), out.notes.begin(), out.notes.end());
  } else {
    const int n = spec.samples == SampleClass::full ? cfg.samples : std::min(100, cfg.samples);
    const std::vector<PhasePoint> pts = sample_points({spec.domain, spec.exclude}, seed, n);
    Sweep total;
    const int threads = std::max(1, std::min(cfg.threads, n));
    if (threads == 1) {
      total = sweep(spec, pts, 0, pts.size());
    } else {
      std::vector<Sweep> parts(static_cast<std::size_t>(threads));
      std::vector<std::thread> pool;
      const std::size_t chunk = (pts.size() + threads - 1) / threads;
      for (int t = 0; t < threads; ++t) {
        const std::size_t b = std::min(pts.size(), t * chunk);
        const std::size_t e = std::min(pts.size(), b + chunk);
        pool.emplace_back([&parts, &spec, &pts, t, b, e] { parts[t] = sweep(spec, pts, b, e); });
      }
      for (auto& th : pool) th.join();
      total = parts[0];
      for (std::size_t t = 1; t < parts.size(); ++t) {
        if (parts[t].worst >= 0.0 || parts[t].first_error) merge(total, parts[t]);
      }
    }
    rep.samples_run = n;
    rep.max_abs_residual = total.worst;
    rep.worst_point = pts[total.worst_index];
    for (const auto& [name, v] : total.part_max) {
      if (!(rank(v) < rep.tolerance)) {
        rep.notes.push_back("discrepancy " + name + ": max residual " + format_number(v) + " >= " +
                            format_number(rep.tolerance));
      }
    }
    if (total.first_error) {
      rep.notes.push_back("error at sample " + std::to_string(total.first_error->first) + ": " + total.first_error->second);
    }
  }

  rep.pass = rank(rep.max_abs_residual) < rep.tolerance;
  if (rep.pass) {
    rep.status = Status::pass;
  } else if (spec.finding && rep.notes.size() > (spec.note.empty() ? 0u : 1u)) {
    rep.status = Status::flagged;
  } else {
    rep.status = Status::fail;
  }
  return rep;
}

const std::vector<CheckSpec>& registry() {
  static const std::vector<CheckSpec> all = [] {
    std::vector<CheckSpec> out;
    for (auto* make : {&calculus_checks, &polar_checks, &parabolic_checks, &flow_checks}) {
      auto part = make();
      out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (out[i].id == out[j].id) throw std::logic_error("duplicate check id " + out[i].id);
      }
    }
    return out;
  }();
  return all;
}

const CheckSpec& find_check(const std::string& id) {
  for (const auto& c : registry()) {
    if (c.id == id) return c;
  }
  throw UnknownCheck("unknown check '" + id + "'");
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"calculus", "polar", "parabolic", "flow", "all"};
  return names;
}

bool is_suite(const std::string& name) {
  const auto& n = suite_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

CheckReport run_check(const std::string& id, std::uint64_t seed, const RunConfig& cfg) {
  return run_check(find_check(id), seed, cfg);
}

SuiteReport run_suite(const std::string& suite, std::uint64_t seed, const RunConfig& cfg) {
  if (!is_suite(suite)) throw UnknownSuite("unknown suite '" + suite + "'");
  const auto start = std::chrono::steady_clock::now();
  SuiteReport rep;
  rep.suite = suite;
  rep.seed = seed;
  rep.config = cfg;
  for (const auto& spec : registry()) {
    if (suite != "all" && spec.suite != suite) continue;
    rep.checks.push_back(run_check(spec, seed, cfg));
    switch (rep.checks.back().status) {
      case Status::pass:
        ++rep.passed;
        break;
      case Status::fail:
        ++rep.failed;
        break;
      case Status::flagged:
        ++rep.flagged;
        break;
    }
  }
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

const std::map<std::string, std::vector<std::string>>& coverage_map() {
  static const std::map<std::string, std::vector<std::string>> m{
      {"polar: M_r and N_phi rotate under the flow", {"polar.bracket.Mr", "polar.bracket.Nphi"}},
      {"polar: J34 = M_r N_phi* is a constant of motion", {"polar.integral.J3", "polar.integral.J4", "flow.polar.J3", "flow.polar.J4"}},
      {"polar: p_phi is a constant of motion", {"polar.integral.pphi", "flow.polar.pphi"}},
      {"polar: the dynamical field is the Hamiltonian field of H", {"polar.gamma.defining"}},
      {"polar: |M_r|^2 is a quartic polynomial in the momenta", {"polar.record.modulus"}},
      {"polar: printed Y_r, Y_phi are the Hamiltonian fields of M_r, N_phi", {"polar.audit.y_fields", "polar.y34.annihilates_H"}},
      {"polar: [Gamma, Y] = i J34 X_lambda", {"polar.lie.bracket_Y"}},
      {"polar: quasi-Hamiltonian with factor lambda for Omega", {"polar.quasi_hamiltonian.complex"}},
      {"polar: quasi-bi-Hamiltonian for Omega1, Omega2", {"polar.quasi_hamiltonian.real1", "polar.quasi_hamiltonian.real2"}},
      {"polar: L_Y omega0 = -Omega, L_Y' omega0 = Omega", {"polar.lie.Y", "polar.lie.Yprime"}},
      {"polar: alpha and beta coefficient tables", {"polar.audit.alpha_table", "polar.audit.beta_table"}},
      {"polar: Omega, Omega1, Omega2 are degenerate", {"polar.degeneracy.wedge"}},
      {"polar: kernel fields Z1, Z2", {"polar.audit.kernel", "calculus.kernel.annihilation"}},
      {"polar: the flow preserves the kernel distribution", {"polar.kernel.invariance", "polar.kernel.invariance_rescaled"}},
      {"polar: orthogonality of Gamma and Y4, Y3", {"polar.orthogonality"}},
      {"polar: recursion operators R1, R2", {"polar.audit.recursion"}},
      {"polar: spectrum of R1, R2 is {0, 0, mu, mu}", {"polar.spectrum.det", "polar.spectrum.pairing"}},
      {"polar: R1, R2 have nonvanishing Nijenhuis torsion", {"polar.nijenhuis.R1", "polar.nijenhuis.R2"}},
      {"polar: displayed J4 expansion", {"polar.audit.j4_display", "polar.audit.j4_sign_flip"}},
      {"oscillator: doubled rotation rate and the Fradkin component", {"polar.oscillator.bracket", "polar.oscillator.fradkin", "flow.oscillator.fradkin"}},
      {"parabolic: M_a and M_b rotate under the flow", {"parabolic.bracket.Ma", "parabolic.bracket.Mb"}},
      {"parabolic: K34 = M_a M_b* is a constant of motion", {"parabolic.integral.K3", "parabolic.integral.K4", "flow.parabolic.K3", "flow.parabolic.K4"}},
      {"parabolic: Rx is a constant of motion", {"parabolic.integral.Rx", "flow.parabolic.Rx"}},
      {"parabolic: K4 = -2 J^2 H and the modulus identities", {"parabolic.record.K4", "parabolic.record.modulus"}},
      {"parabolic: displayed K3 expression", {"parabolic.record.k3_scaling", "parabolic.audit.k3_display"}},
      {"parabolic: printed dynamical field", {"parabolic.audit.gamma"}},
      {"parabolic: printed Z_a, Z_b are the Hamiltonian fields of M_a, M_b", {"parabolic.audit.z_fields", "parabolic.z34.annihilates_H"}},
      {"parabolic: [Gamma, Z] = i K34 X_lambda", {"parabolic.lie.bracket_Z"}},
      {"parabolic: quasi-Hamiltonian with factor lambda for Omega_ab", {"parabolic.quasi_hamiltonian.complex"}},
      {"parabolic: quasi-bi-Hamiltonian for Omega_ab1, Omega_ab2", {"parabolic.quasi_hamiltonian.real1", "parabolic.quasi_hamiltonian.real2"}},
      {"parabolic: L_Z omega0 = -Omega_ab, L_Z' omega0 = Omega_ab", {"parabolic.lie.Z", "parabolic.lie.Zprime"}},
      {"parabolic: alpha and beta coefficient tables", {"parabolic.audit.alpha_table", "parabolic.audit.beta_table"}},
      {"parabolic: Omega_ab1, Omega_ab2 are degenerate", {"parabolic.degeneracy.wedge"}},
      {"parabolic: the flow preserves the kernel of Omega_ab", {"parabolic.kernel.invariance", "parabolic.kernel.invariance_rescaled"}},
      {"parabolic: recursion operators and their spectra", {"parabolic.spectrum.det", "parabolic.spectrum.pairing"}},
      {"parabolic: orthogonality of Gamma and X_K4, X_K3", {"parabolic.orthogonality"}},
      {"parabolic: second integral for separable potentials", {"parabolic.separable.reduces_to_Rx", "parabolic.separable.conservation"}},
      {"charts: lift, coupling map and angular momentum", {"charts.roundtrip.polar", "charts.roundtrip.parabolic", "charts.lift.symplectic", "charts.cross_chart.hamiltonian", "charts.cross_chart.angular_momentum"}},
      {"calculus: brackets, Hamiltonian fields and forms", {"calculus.bracket.antisymmetry", "calculus.bracket.leibniz", "calculus.bracket.jacobi", "calculus.hvf.defining", "calculus.form.antisymmetry", "calculus.wedge22.symmetry", "calculus.recursion.identity", "calculus.gradient.polar", "calculus.gradient.parabolic", "calculus.exterior.closed", "calculus.lie.hamiltonian_preserves"}},
      {"flow: energy and structure of the midpoint rule", {"flow.polar.energy", "flow.symplecticity", "flow.reversibility", "flow.order", "flow.rk4_agreement"}},
  };
  return m;
}

}  // namespace kqbh
