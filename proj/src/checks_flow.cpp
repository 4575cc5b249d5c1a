#include <cmath>

#include "check_util.hpp"
#include "kqbh/flow.hpp"
#include "kqbh/parabolic.hpp"
#include "kqbh/polar.hpp"

namespace kqbh {

namespace {

using namespace checks;

constexpr double g = 1.0;

// Reference runs, integrated once and shared by the checks that read them.

const Trajectory& polar_run() {
  static const Trajectory t = [] {
    IntegratorConfig cfg;
    cfg.steps = 50000;
    return integrate(polar::hamiltonian(g), PhasePoint::make(ChartId::polar, 1.0, 0.0, 0.0, 1.2), cfg,
                     {polar::hamiltonian(g), polar::j3(g), polar::j4(g), polar::angular_momentum()});
  }();
  return t;
}

const Trajectory& parabolic_run() {
  static const Trajectory t = [] {
    IntegratorConfig cfg;
    cfg.steps = 20000;
    return integrate(parabolic::hamiltonian(g), PhasePoint::make(ChartId::parabolic, 1.0, 1.0, 1.0, 0.0), cfg,
                     {parabolic::k3(g), parabolic::k4(g), parabolic::rx(g)});
  }();
  return t;
}

const Trajectory& oscillator_run() {
  static const Trajectory t = [] {
    IntegratorConfig cfg;
    cfg.steps = 10000;
    const ComplexObservable f = polar::fradkin(1.0);
    return integrate(polar::oscillator_hamiltonian(1.0), PhasePoint::make(ChartId::polar, 1.0, 0.0, 1.0, 1.0), cfg,
                     {f.re, f.im});
  }();
  return t;
}

Outcome drift(const Trajectory& t, std::size_t k) {
  Outcome o;
  const MonitorSummary& s = t.summary.at(k);
  o.residual = s.rel_drift;
  o.samples_run = static_cast<int>(t.times.size());
  o.worst_point = t.states.front();
  o.notes.push_back(s.name + "(0) = " + fmt(s.initial) + ", max |m - m0| = " + fmt(s.max_abs_dev));
  return o;
}

CheckSpec trajectory_check(std::string id, std::string ref, Tier tier, double tol, std::function<Outcome()> fn,
                    std::string note = {}) {
  CheckSpec s = single(std::move(id), std::move(ref), "flow", CheckKind::trajectory, tier, tol, std::move(fn),
                       std::move(note));
  return s;
}

PhasePoint midpoint_run(const ScalarField& h, PhasePoint p, double step, int n) {
  for (int i = 0; i < n; ++i) p = implicit_midpoint_step(h, p, step);
  return p;
}

PhasePoint rk4_run(const ScalarField& h, PhasePoint p, double step, int n) {
  for (int i = 0; i < n; ++i) p = rk4_step(h, p, step);
  return p;
}

}  // namespace

std::vector<CheckSpec> flow_checks() {
  const std::string suite = "flow";
  std::vector<CheckSpec> out;
  const char* drift_note = "relative drift max|m - m0| / (1 + |m0|), midpoint h = 1e-3";

  out.push_back(trajectory_check("flow.polar.energy", "|H - H0| / |H0| along the midpoint flow from (1, 0, 0, 1.2)",
                          Tier::custom, 1e-8, [] {
                            Outcome o = drift(polar_run(), 0);
                            const MonitorSummary& s = polar_run().summary[0];
                            o.residual = s.max_abs_dev / std::abs(s.initial);
                            return o;
                          }, "50000 steps, h = 1e-3"));
  out.push_back(trajectory_check("flow.polar.J3", "J3 conserved along the polar flow", Tier::fd, 0.0,
                          [] { return drift(polar_run(), 1); }, drift_note));
  out.push_back(trajectory_check("flow.polar.J4", "J4 conserved along the polar flow", Tier::fd, 0.0,
                          [] { return drift(polar_run(), 2); }, drift_note));
  out.push_back(trajectory_check("flow.polar.pphi", "p_phi conserved along the polar flow", Tier::fd, 0.0,
                          [] { return drift(polar_run(), 3); }, drift_note));
  out.push_back(trajectory_check("flow.parabolic.K3", "K3 conserved along the parabolic flow from (1, 1, 1, 0)", Tier::fd, 0.0,
                          [] { return drift(parabolic_run(), 0); }, "20000 steps; relative drift as for the polar run"));
  out.push_back(trajectory_check("flow.parabolic.K4", "K4 conserved along the parabolic flow from (1, 1, 1, 0)", Tier::fd, 0.0,
                          [] { return drift(parabolic_run(), 1); }, "20000 steps; relative drift as for the polar run"));
  out.push_back(trajectory_check("flow.parabolic.Rx", "Rx conserved along the parabolic flow from (1, 1, 1, 0)", Tier::fd, 0.0,
                          [] { return drift(parabolic_run(), 2); }, "20000 steps; relative drift as for the polar run"));
  out.push_back(trajectory_check("flow.oscillator.fradkin", "F = M_r (N_phi*)^2 conserved along the oscillator flow", Tier::fd,
                          0.0, [] {
                            const Trajectory& t = oscillator_run();
                            const Complex f0(t.rows.front()[0], t.rows.front()[1]);
                            double dev = 0.0;
                            for (const auto& row : t.rows) dev = std::max(dev, std::abs(Complex(row[0], row[1]) - f0));
                            Outcome o;
                            o.residual = dev / std::abs(f0);
                            o.samples_run = static_cast<int>(t.times.size());
                            o.worst_point = t.states.front();
                            o.notes.push_back("|F0| = " + fmt(std::abs(f0)) + ", max |F - F0| = " + fmt(dev));
                            return o;
                          }, "|F - F0| / |F0|, alpha0 = 1, 10000 steps from (1, 0, 1, 1)"));

  out.push_back(pointwise("flow.symplecticity", "J^T Omega0 J = Omega0 for one midpoint step, h = 1e-2", suite,
                          DomainId::polar, Tier::fd, SampleClass::reduced, [](const PhasePoint& p) {
                            const ScalarField h = polar::hamiltonian(g);
                            Mat4 jac;
                            for (int k = 0; k < 4; ++k) {
                              const double e = fd_step(p[k]);
                              Vec4 plus = p.coords();
                              Vec4 minus = p.coords();
                              plus[k] += e;
                              minus[k] -= e;
                              const PhasePoint fp = implicit_midpoint_step(h, PhasePoint::make(ChartId::polar, plus), 1e-2);
                              const PhasePoint fm = implicit_midpoint_step(h, PhasePoint::make(ChartId::polar, minus), 1e-2);
                              jac.col(k) = chart_difference(fm, fp) / (2.0 * e);
                            }
                            return value(max_abs(Mat4(jac.transpose() * canonical_matrix() * jac - canonical_matrix())));
                          }, "Jacobian by central differences"));
  out.back().kind = CheckKind::trajectory;
  {
    CheckSpec s = pointwise("flow.reversibility", "a midpoint step of -h undoes a step of h, h = 1e-2", suite,
                            DomainId::polar, Tier::custom, SampleClass::reduced, [](const PhasePoint& p) {
                              const ScalarField h = polar::hamiltonian(g);
                              const PhasePoint back = implicit_midpoint_step(h, implicit_midpoint_step(h, p, 1e-2), -1e-2);
                              return value(max_abs(chart_difference(p, back)));
                            });
    s.kind = CheckKind::trajectory;
    s.custom_tolerance = 1e-10;
    out.push_back(std::move(s));
  }
  out.push_back(trajectory_check(
      "flow.order", "global midpoint error ratio e(h) / e(h/2) = 4 at t = 1", Tier::custom, 1.0,
      [] {
        const ScalarField h = polar::hamiltonian(g);
        const PhasePoint p0 = PhasePoint::make(ChartId::polar, 1.0, 0.0, 0.3, 1.1);
        const PhasePoint ref = rk4_run(h, p0, 1e-4, 10000);
        const double e1 = max_abs(chart_difference(ref, midpoint_run(h, p0, 2e-2, 50)));
        const double e2 = max_abs(chart_difference(ref, midpoint_run(h, p0, 1e-2, 100)));
        Outcome o;
        o.residual = std::abs(e1 / e2 - 4.0);
        o.worst_point = p0;
        o.samples_run = 3;
        o.notes.push_back("e(h) = " + fmt(e1) + ", e(h/2) = " + fmt(e2) + ", ratio " + fmt(e1 / e2));
        return o;
      },
      "residual |ratio - 4|; reference RK4 with h = 1e-4"));
  out.push_back(trajectory_check(
      "flow.rk4_agreement", "Richardson-extrapolated midpoint = RK4 at t = 1", Tier::custom, 1e-9,
      [] {
        const ScalarField h = polar::hamiltonian(g);
        const PhasePoint p0 = PhasePoint::make(ChartId::polar, 1.0, 0.0, 0.3, 1.1);
        const PhasePoint a = midpoint_run(h, p0, 1e-3, 1000);
        const PhasePoint b = midpoint_run(h, p0, 5e-4, 2000);
        const PhasePoint r = rk4_run(h, p0, 1e-3, 1000);
        // error of the symmetric method is even in h, so (4 x(h/2) - x(h)) / 3 is fourth order
        const Vec4 extrapolated = b.coords() + chart_difference(a, b) / 3.0;
        const Vec4 diff = chart_difference(r, PhasePoint::make(ChartId::polar, extrapolated));
        Outcome o;
        o.residual = max_abs(diff);
        o.worst_point = p0;
        o.samples_run = 3;
        return o;
      },
      "midpoint h = 1e-3 and 5e-4 against RK4 h = 1e-3"));
  return out;
}

}  // namespace kqbh
