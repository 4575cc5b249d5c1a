#include "kqbh/flow.hpp"

#include <cmath>
#include <stdexcept>

namespace kqbh {

std::string_view to_string(Method m) {
  return m == Method::rk4 ? "rk4" : "implicit_midpoint";
}

Method method_from_string(std::string_view name) {
  if (name == "implicit_midpoint" || name == "midpoint") return Method::implicit_midpoint;
  if (name == "rk4") return Method::rk4;
  throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

namespace {

Vec4 rate(const ScalarField& H, ChartId chart, const Vec4& x) {
  const Vec4 dh = H.gradient(PhasePoint::make(chart, x));
  return Vec4(dh[2], dh[3], -dh[0], -dh[1]);
}

void require_step(double h) {
  if (!std::isfinite(h)) throw DomainError("step size must be finite");
}

}  // namespace

PhasePoint implicit_midpoint_step(const ScalarField& H, const PhasePoint& pt, double h, double tol, int max_iter) {
  require_step(h);
  if (h == 0.0) return pt;
  if (pt.chart() != H.chart) throw ChartMismatch("integrator: point and Hamiltonian charts differ");
  const Vec4 x = pt.coords();
  Vec4 y = x + h * rate(H, pt.chart(), x);
  for (int it = 0; it < max_iter; ++it) {
    const Vec4 next = x + h * rate(H, pt.chart(), 0.5 * (x + y));
    const double change = (next - y).cwiseAbs().maxCoeff();
    y = next;
    if (change < tol) return PhasePoint::make(pt.chart(), y);
  }
  throw NoConvergence("implicit midpoint: fixed-point iteration did not reach " + std::to_string(tol) + " in " +
                      std::to_string(max_iter) + " iterations");
}

PhasePoint rk4_step(const ScalarField& H, const PhasePoint& pt, double h) {
  require_step(h);
  if (h == 0.0) return pt;
  if (pt.chart() != H.chart) throw ChartMismatch("integrator: point and Hamiltonian charts differ");
  const ChartId c = pt.chart();
  const Vec4 x = pt.coords();
  const Vec4 k1 = rate(H, c, x);
  const Vec4 k2 = rate(H, c, x + 0.5 * h * k1);
  const Vec4 k3 = rate(H, c, x + 0.5 * h * k2);
  const Vec4 k4 = rate(H, c, x + h * k3);
  return PhasePoint::make(c, x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

Trajectory integrate(const ScalarField& H, const PhasePoint& pt0, const IntegratorConfig& cfg,
                     const std::vector<ScalarField>& monitors) {
  if (!(cfg.h > 0.0) || !std::isfinite(cfg.h)) throw DomainError("step size must be positive and finite");
  if (cfg.steps < 0) throw DomainError("step count must be non-negative");
  if (!(cfg.fixed_point_tol > 0.0) || cfg.fixed_point_max_iter < 1) throw DomainError("solver tolerances must be positive");
  for (const auto& m : monitors) {
    if (m.chart != pt0.chart()) throw ChartMismatch("monitor '" + m.name + "' is on another chart");
  }

  Trajectory tr;
  tr.chart = pt0.chart();
  tr.times.reserve(static_cast<std::size_t>(cfg.steps) + 1);
  tr.states.reserve(static_cast<std::size_t>(cfg.steps) + 1);
  tr.rows.reserve(static_cast<std::size_t>(cfg.steps) + 1);
  for (const auto& m : monitors) tr.monitor_names.push_back(m.name);

  auto record = [&](double t, const PhasePoint& p) {
    std::vector<double> row;
    row.reserve(monitors.size());
    for (const auto& m : monitors) row.push_back(m.value(p));
    tr.times.push_back(t);
    tr.states.push_back(p);
    tr.rows.push_back(std::move(row));
  };

  PhasePoint p = pt0;
  record(0.0, p);
  for (long i = 1; i <= cfg.steps; ++i) {
    try {
      p = cfg.method == Method::rk4 ? rk4_step(H, p, cfg.h)
                                    : implicit_midpoint_step(H, p, cfg.h, cfg.fixed_point_tol, cfg.fixed_point_max_iter);
    } catch (const NoConvergence& e) {
      throw NoConvergence("step " + std::to_string(i) + ": " + e.what());
    } catch (const DomainError& e) {
      throw DomainError("step " + std::to_string(i) + ": " + e.what());
    }
    record(static_cast<double>(i) * cfg.h, p);
  }

  for (std::size_t k = 0; k < monitors.size(); ++k) {
    const double m0 = tr.rows.front()[k];
    double dev = 0.0;
    for (const auto& row : tr.rows) dev = std::max(dev, std::abs(row[k] - m0));
    tr.summary.push_back({monitors[k].name, m0, dev, dev / (1.0 + std::abs(m0))});
  }
  return tr;
}

}  // namespace kqbh
