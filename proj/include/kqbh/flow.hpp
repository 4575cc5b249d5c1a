#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "kqbh/calculus.hpp"

namespace kqbh {

enum class Method { implicit_midpoint, rk4 };

std::string_view to_string(Method m);
/// Accepts "implicit_midpoint" (or "midpoint") and "rk4"; throws std::invalid_argument.
Method method_from_string(std::string_view name);

struct IntegratorConfig {
  Method method = Method::implicit_midpoint;
  double h = 1e-3;
  long steps = 1000;
  double fixed_point_tol = 1e-13;
  int fixed_point_max_iter = 50;
};

/// Solves x' = x + h X_H((x + x')/2) by fixed-point iteration started from
/// the explicit Euler predictor.
PhasePoint implicit_midpoint_step(const ScalarField& H, const PhasePoint& pt, double h, double tol = 1e-13,
                                  int max_iter = 50);
PhasePoint rk4_step(const ScalarField& H, const PhasePoint& pt, double h);

struct MonitorSummary {
  std::string name;
  double initial;
  double max_abs_dev;  // max_t |m(t) - m(0)|
  double rel_drift;    // max_abs_dev / (1 + |m(0)|)
};

struct Trajectory {
  ChartId chart;
  std::vector<double> times;
  std::vector<PhasePoint> states;
  std::vector<std::string> monitor_names;
  std::vector<std::vector<double>> rows;  // one row per time, one entry per monitor
  std::vector<MonitorSummary> summary;
};

/// Steps `cfg.steps` times; errors from a step are rethrown with the step
/// index in the message.
Trajectory integrate(const ScalarField& H, const PhasePoint& pt0, const IntegratorConfig& cfg,
                     const std::vector<ScalarField>& monitors);

}  // namespace kqbh
