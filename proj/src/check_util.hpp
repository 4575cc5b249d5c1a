#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <utility>

#include "kqbh/calculus.hpp"
#include "kqbh/verify.hpp"

namespace kqbh::checks {

inline const Complex kI{0.0, 1.0};

inline CheckSpec pointwise(std::string id, std::string ref, std::string suite, DomainId domain, Tier tier,
                           SampleClass samples, std::function<Eval(const PhasePoint&)> fn, std::string note = {}) {
  CheckSpec s;
  s.id = std::move(id);
  s.ref = std::move(ref);
  s.suite = std::move(suite);
  s.kind = CheckKind::pointwise;
  s.tier = tier;
  s.samples = samples;
  s.domain = domain;
  s.pointwise = std::move(fn);
  s.note = std::move(note);
  return s;
}

inline CheckSpec single(std::string id, std::string ref, std::string suite, CheckKind kind, Tier tier,
                        double custom_tolerance, std::function<Outcome()> fn, std::string note = {}) {
  CheckSpec s;
  s.id = std::move(id);
  s.ref = std::move(ref);
  s.suite = std::move(suite);
  s.kind = kind;
  s.tier = tier;
  s.custom_tolerance = custom_tolerance;
  s.single = std::move(fn);
  s.note = std::move(note);
  return s;
}

inline Eval value(double r) { return {r, {}}; }

inline double norm_inf(const CVec4& v) { return max_abs(v); }
inline double norm_inf(const CMat4& m) { return max_abs(m); }

/// Largest |coefficient| of a 2-form.
inline double form_norm(const FormCoeffs& c) {
  double m = 0.0;
  for (const Complex& v : c) m = std::max(m, std::abs(v));
  return m;
}

inline CVec4 as_complex(const Vec4& v) { return v.cast<Complex>(); }

/// Coordinate field d/dx_k.
inline VectorField unit_field(ChartId chart, int k) {
  return {"e" + std::to_string(k), chart, [k](const PhasePoint&) {
            CVec4 v = CVec4::Zero();
            v[k] = 1.0;
            return v;
          }};
}

/// f * X as a field.
inline VectorField scaled_field(const ScalarField& f, const VectorField& x, std::string name) {
  return {std::move(name), x.chart, [f, x](const PhasePoint& p) { return CVec4(f.value(p) * x(p)); }};
}

/// max over coordinate pairs i < j of |N_R(e_i, e_j)|
inline std::pair<double, std::string> max_torsion(const TensorField& r, const PhasePoint& p) {
  double best = 0.0;
  std::string arg;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const double n = max_abs(nijenhuis_torsion(r, unit_field(p.chart(), i), unit_field(p.chart(), j), p));
      if (n > best) {
        best = n;
        arg = "(e" + std::to_string(i) + ", e" + std::to_string(j) + ")";
      }
    }
  }
  return {best, arg};
}

inline std::string fmt(double v) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 3);
  return std::string(buf, r.ptr);
}

}  // namespace kqbh::checks
