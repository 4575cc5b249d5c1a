#include "kqbh/charts.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kqbh {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double normalize_angle(double phi) {
  double out = std::fmod(phi, kTwoPi);
  if (out < 0.0) out += kTwoPi;
  if (out >= kTwoPi) out = 0.0;
  return out;
}

double wrap_difference(double d) {
  d = std::remainder(d, kTwoPi);
  if (d <= -std::numbers::pi) d += kTwoPi;
  return d;
}

}  // namespace

std::string_view to_string(ChartId chart) {
  switch (chart) {
    case ChartId::cartesian:
      return "cartesian";
    case ChartId::polar:
      return "polar";
    case ChartId::parabolic:
      return "parabolic";
  }
  return "unknown";
}

ChartId chart_from_string(std::string_view name) {
  if (name == "cartesian") return ChartId::cartesian;
  if (name == "polar") return ChartId::polar;
  if (name == "parabolic") return ChartId::parabolic;
  throw std::invalid_argument("unknown chart '" + std::string(name) + "'");
}

PhasePoint PhasePoint::make(ChartId chart, double q1, double q2, double p1, double p2) {
  if (!std::isfinite(q1) || !std::isfinite(q2) || !std::isfinite(p1) || !std::isfinite(p2)) {
    throw DomainError("phase point has non-finite components");
  }
  switch (chart) {
    case ChartId::cartesian:
      break;
    case ChartId::polar:
      if (!(q1 >= kOriginGuard)) throw DomainError("polar point with r = " + std::to_string(q1) + " below guard");
      q2 = normalize_angle(q2);
      break;
    case ChartId::parabolic:
      if (!(q1 * q1 + q2 * q2 >= kOriginGuard)) throw DomainError("parabolic point too close to a = b = 0");
      break;
  }
  return PhasePoint(chart, Vec4(q1, q2, p1, p2));
}

Vec4 chart_difference(const PhasePoint& a, const PhasePoint& b) {
  if (a.chart() != b.chart()) throw ChartMismatch("chart_difference across charts");
  Vec4 d = b.coords() - a.coords();
  if (a.chart() == ChartId::polar) d[1] = wrap_difference(d[1]);
  return d;
}

PhasePoint to_cartesian(const PhasePoint& pt) {
  switch (pt.chart()) {
    case ChartId::cartesian:
      return pt;
    case ChartId::polar: {
      const double r = pt.q1();
      const double c = std::cos(pt.q2());
      const double s = std::sin(pt.q2());
      const double pr = pt.p1();
      const double pphi = pt.p2();
      return PhasePoint::make(ChartId::cartesian, r * c, r * s, pr * c - (pphi / r) * s, pr * s + (pphi / r) * c);
    }
    case ChartId::parabolic: {
      const double a = pt.q1();
      const double b = pt.q2();
      const double pa = pt.p1();
      const double pb = pt.p2();
      const double s = a * a + b * b;
      return PhasePoint::make(ChartId::cartesian, 0.5 * (a * a - b * b), a * b, (a * pa - b * pb) / s,
                              (b * pa + a * pb) / s);
    }
  }
  throw std::logic_error("unhandled chart");
}

PhasePoint from_cartesian(const PhasePoint& pt, ChartId target) {
  if (pt.chart() != ChartId::cartesian) throw ChartMismatch("from_cartesian expects a Cartesian point");
  const double x = pt.q1();
  const double y = pt.q2();
  const double px = pt.p1();
  const double py = pt.p2();
  const double r = std::hypot(x, y);
  if (target != ChartId::cartesian && r == 0.0) throw DomainError("base point at the origin");

  switch (target) {
    case ChartId::cartesian:
      return pt;
    case ChartId::polar: {
      const double phi = std::atan2(y, x);
      const double c = x / r;
      const double s = y / r;
      return PhasePoint::make(ChartId::polar, r, phi, px * c + py * s, x * py - y * px);
    }
    case ChartId::parabolic: {
      // a^2 = r + x, b^2 = r - x; pick the root formula that avoids cancellation.
      double a = 0.0;
      double b = 0.0;
      if (x >= 0.0) {
        a = std::sqrt(r + x);
        b = y / a;
      } else {
        const double babs = std::sqrt(r - x);
        a = std::abs(y) / babs;
        b = std::signbit(y) ? -babs : babs;
      }
      return PhasePoint::make(ChartId::parabolic, a, b, a * px + b * py, -b * px + a * py);
    }
  }
  throw std::logic_error("unhandled chart");
}

PhasePoint transport(const PhasePoint& pt, ChartId target) {
  if (pt.chart() == target) return pt;
  return from_cartesian(to_cartesian(pt), target);
}

double map_coupling(double g, ChartId from, ChartId to) {
  if (!(g > 0.0)) throw DomainError("coupling constant must be positive");
  auto scale = [](ChartId c) { return c == ChartId::parabolic ? 2.0 : 1.0; };
  return g * scale(to) / scale(from);
}

const Mat4& canonical_matrix() {
  static const Mat4 m = [] {
    Mat4 out = Mat4::Zero();
    out(0, 2) = 1.0;
    out(1, 3) = 1.0;
    out(2, 0) = -1.0;
    out(3, 1) = -1.0;
    return out;
  }();
  return m;
}

}  // namespace kqbh
