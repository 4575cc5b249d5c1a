#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "kqbh/charts.hpp"

namespace kqbh::test {

inline constexpr double kPi = std::numbers::pi;

inline PhasePoint pol(double r, double phi, double pr, double pphi) {
  return PhasePoint::make(ChartId::polar, r, phi, pr, pphi);
}

inline PhasePoint par(double a, double b, double pa, double pb) {
  return PhasePoint::make(ChartId::parabolic, a, b, pa, pb);
}

inline PhasePoint cart(double x, double y, double px, double py) {
  return PhasePoint::make(ChartId::cartesian, x, y, px, py);
}

// small deterministic grid of well-conditioned points
inline std::vector<PhasePoint> polar_grid() {
  std::vector<PhasePoint> out;
  for (double r : {0.6, 1.3, 2.7})
    for (double phi : {0.2, 1.9, 4.4})
      for (double pr : {-1.5, 0.4})
        for (double pphi : {-1.1, 0.7}) out.push_back(pol(r, phi, pr, pphi));
  return out;
}

inline std::vector<PhasePoint> parabolic_grid() {
  std::vector<PhasePoint> out;
  for (double a : {-1.7, 0.6, 1.4})
    for (double b : {-0.8, 1.1})
      for (double pa : {-1.2, 0.5})
        for (double pb : {-0.9, 1.6}) {
          const PhasePoint p = par(a, b, pa, pb);
          if (std::abs(a * pb - b * pa) >= 0.1) out.push_back(p);
        }
  return out;
}

}  // namespace kqbh::test
