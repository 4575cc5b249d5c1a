#pragma once

#include <string>
#include <string_view>

#include "kqbh/types.hpp"

namespace kqbh {

enum class ChartId { cartesian, polar, parabolic };

std::string_view to_string(ChartId chart);
/// Throws std::invalid_argument for unknown names.
ChartId chart_from_string(std::string_view name);

/// Points closer than this to the origin (r, or a^2 + b^2) are rejected.
inline constexpr double kOriginGuard = 1e-9;

/// A point of the cotangent bundle in one chart: (q1, q2, p1, p2).
///
/// Polar points keep r > 0 and phi in [0, 2pi); parabolic points keep
/// (a, b) away from the origin. Construction through `make` enforces both.
class PhasePoint {
 public:
  static PhasePoint make(ChartId chart, double q1, double q2, double p1, double p2);
  static PhasePoint make(ChartId chart, const Vec4& x) { return make(chart, x[0], x[1], x[2], x[3]); }

  ChartId chart() const { return chart_; }
  double q1() const { return x_[0]; }
  double q2() const { return x_[1]; }
  double p1() const { return x_[2]; }
  double p2() const { return x_[3]; }
  const Vec4& coords() const { return x_; }
  double operator[](int i) const { return x_[i]; }

  friend bool operator==(const PhasePoint& a, const PhasePoint& b) {
    return a.chart_ == b.chart_ && a.x_ == b.x_;
  }

 private:
  PhasePoint(ChartId chart, const Vec4& x) : chart_(chart), x_(x) {}

  ChartId chart_;
  Vec4 x_;
};

/// Difference b - a of two points in the same chart, with the polar angle
/// component wrapped into (-pi, pi].
Vec4 chart_difference(const PhasePoint& a, const PhasePoint& b);

PhasePoint to_cartesian(const PhasePoint& pt);

/// Inverse of to_cartesian onto the canonical branch: phi in [0, 2pi) for
/// polar; a >= 0 (and b >= 0 when a == 0) for parabolic.
PhasePoint from_cartesian(const PhasePoint& pt, ChartId target);

/// Transport between any two charts through Cartesian coordinates.
PhasePoint transport(const PhasePoint& pt, ChartId target);

/// The polar chart writes V = -g/r while the parabolic chart writes
/// V = -g/(a^2 + b^2); with r = (a^2 + b^2)/2 one physical system has
/// g_parabolic = 2 g_polar. Cartesian uses the polar convention.
double map_coupling(double g, ChartId from, ChartId to);

/// Canonical symplectic matrix: omega0(X, Y) = X^T * canonical_matrix() * Y.
const Mat4& canonical_matrix();

}  // namespace kqbh
