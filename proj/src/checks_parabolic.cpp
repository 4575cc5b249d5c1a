#include <cmath>

#include "check_util.hpp"
#include "kqbh/parabolic.hpp"

namespace kqbh {

namespace {

using namespace checks;

constexpr double g = 1.0;

Eval rotation(const ComplexObservable& m, const PhasePoint& p) {
  static const ComplexObservable h = real_observable(parabolic::hamiltonian(g));
  const Complex v = m.value(p);
  const double lam = parabolic::lambda()(p);
  return value(std::abs(poisson_bracket(m, h, p) - kI * lam * v) / (1.0 + std::abs(v)));
}

Eval integral(const ScalarField& f, const PhasePoint& p) {
  const ScalarField h = parabolic::hamiltonian(g);
  return value(std::abs(poisson_bracket(f, h, p)) / (1.0 + std::abs(h(p))));
}

Eval table_audit(const PhasePoint& p, char family) {
  const parabolic::Forms f = parabolic::forms(p, g);
  Eval e;
  for (const auto& a : f.audit) {
    if (a.name.front() != family) continue;
    e.residual = std::max(e.residual, a.residual);
    e.parts.emplace_back(a.name, a.residual);
  }
  return e;
}

FormCoeffs real_part(const FormCoeffs& c) {
  FormCoeffs out{};
  for (int k = 0; k < 6; ++k) out[k] = c[k].real();
  return out;
}

FormCoeffs imag_part(const FormCoeffs& c) {
  FormCoeffs out{};
  for (int k = 0; k < 6; ++k) out[k] = c[k].imag();
  return out;
}

/// |i([W, X]) Omega_ab| / |Omega_ab| for kernel fields frozen at p.
Eval kernel_invariance(const VectorField& x, const PhasePoint& p) {
  const CMat4 omega = parabolic::omega_field(g).matrix(p);
  const double scale = norm_inf(omega);
  const auto fields = parabolic::kernel_fields(p, g);
  if (fields.size() != 2) return value(std::numeric_limits<double>::infinity());
  Eval e;
  for (std::size_t k = 0; k < fields.size(); ++k) {
    const double r = norm_inf(CVec4(interior_product(lie_bracket(fields[k], x, p), omega))) / scale;
    e.residual = std::max(e.residual, r);
    e.parts.emplace_back("W" + std::to_string(k + 1), r);
  }
  return e;
}

Eval spectral(const PhasePoint& p, bool pairing) {
  const parabolic::Recursions rec = parabolic::recursions(p, g);
  Eval e;
  for (const auto& [r, s, name] :
       {std::tuple{rec.R1, rec.spectrum1, "R_ab1"}, std::tuple{rec.R2, rec.spectrum2, "R_ab2"}}) {
    const auto& el = s.poly.elementary;
    double v;
    if (pairing) {
      v = std::abs(el[1] - (el[0] / 2.0) * (el[0] / 2.0)) / std::max(1.0, std::abs(el[1]));
    } else {
      const double n4 = std::pow(max_abs(r), 4);
      v = std::max(std::abs(el[2]), std::abs(el[3])) / n4;
    }
    e.residual = std::max(e.residual, v);
    e.parts.emplace_back(name, v);
  }
  return e;
}

double kepler_split(double) { return -g / 2.0; }

}  // namespace

std::vector<CheckSpec> parabolic_checks() {
  const std::string suite = "parabolic";
  const DomainId dom = DomainId::parabolic;
  std::vector<CheckSpec> out;

  out.push_back(pointwise("parabolic.bracket.Ma", "{M_a, H} = i lambda M_a", suite, dom, Tier::exact, SampleClass::full,
                          [](const PhasePoint& p) { return rotation(parabolic::m_a(g), p); }, "scaled by 1/(1+|M_a|)"));
  out.push_back(pointwise("parabolic.bracket.Mb", "{M_b, H} = i lambda M_b", suite, dom, Tier::exact, SampleClass::full,
                          [](const PhasePoint& p) { return rotation(parabolic::m_b(g), p); }, "scaled by 1/(1+|M_b|)"));
  out.push_back(pointwise("parabolic.integral.K3", "{K3, H} = 0", suite, dom, Tier::exact, SampleClass::full,
                          [](const PhasePoint& p) { return integral(parabolic::k3(g), p); }, "scaled by 1/(1+|H|)"));
  out.push_back(pointwise("parabolic.integral.K4", "{K4, H} = 0", suite, dom, Tier::exact, SampleClass::full,
                          [](const PhasePoint& p) { return integral(parabolic::k4(g), p); }, "scaled by 1/(1+|H|)"));
  out.push_back(pointwise("parabolic.integral.Rx", "{Rx, H} = 0", suite, dom, Tier::exact, SampleClass::full,
                          [](const PhasePoint& p) { return integral(parabolic::rx(g), p); }, "scaled by 1/(1+|H|)"));
  out.push_back(pointwise("parabolic.record.K4", "K4 = Im(M_a M_b*) = -2 J^2 H", suite, dom, Tier::strict,
                          SampleClass::full, [](const PhasePoint& p) {
                            const parabolic::Observables o = parabolic::observables(p, g);
                            return value(std::abs(o.K4 + 2.0 * o.J * o.J * o.H) / (1.0 + std::abs(o.K4)));
                          }, "scaled by 1/(1+|K4|)"));
  out.push_back(pointwise("parabolic.record.modulus",
                          "|M_a|^2 = 2(J^2 H - g Rx + g^2), |M_b|^2 = 2(J^2 H + g Rx + g^2), K34 = M_a M_b*", suite, dom,
                          Tier::custom, SampleClass::full, [](const PhasePoint& p) {
                            const parabolic::Observables o = parabolic::observables(p, g);
                            const double base = o.J * o.J * o.H + g * g;
                            Eval e;
                            e.parts = {{"modA2", std::abs(o.modA2 - 2.0 * (base - g * o.Rx)) / (1.0 + o.modA2)},
                                       {"modB2", std::abs(o.modB2 - 2.0 * (base + g * o.Rx)) / (1.0 + o.modB2)},
                                       {"sum", std::abs(o.modA2 + o.modB2 - 4.0 * base) / (1.0 + o.modA2 + o.modB2)},
                                       {"K34", std::abs(o.K34 - o.M_a * std::conj(o.M_b)) / (1.0 + std::abs(o.K34))}};
                            for (const auto& [n, v] : e.parts) e.residual = std::max(e.residual, v);
                            return e;
                          }, "scaled by 1/(1+|value|)"));
  out.back().custom_tolerance = 1e-12;
  out.push_back(pointwise("parabolic.record.k3_scaling", "Re(M_a M_b*) = 2g (J Px + 2g ab/s)", suite, dom, Tier::strict,
                          SampleClass::full, [](const PhasePoint& p) {
                            const parabolic::Observables o = parabolic::observables(p, g);
                            const double s = p.q1() * p.q1() + p.q2() * p.q2();
                            const double closed = 2.0 * g * (o.J * o.Px + 2.0 * g * p.q1() * p.q2() / s);
                            return value(std::abs(o.K3 - closed) / (1.0 + std::abs(o.K3)));
                          }, "scaled by 1/(1+|K3|)"));
  {
    CheckSpec s = pointwise("parabolic.audit.k3_display", "displayed K3 = J Px + g 2ab/s equals Re(M_a M_b*)", suite, dom,
                            Tier::strict, SampleClass::full, [](const PhasePoint& p) {
                              const parabolic::Observables o = parabolic::observables(p, g);
                              const double r = std::abs(o.K3_displayed - o.K3) / (1.0 + std::abs(o.K3));
                              return Eval{r, {{"K3_displayed", r}}};
                            }, "scaled by 1/(1+|K3|); the displayed value is K3/(2g)");
    s.kind = CheckKind::audit;
    s.finding = true;
    out.push_back(std::move(s));
  }
  out.push_back(pointwise("parabolic.audit.gamma", "printed Gamma = X_H", suite, dom, Tier::strict, SampleClass::full,
                          [](const PhasePoint& p) {
                            return value(max_abs(Vec4(parabolic::gamma(p, g) - parabolic::gamma_printed(p, g))));
                          }));
  {
    CheckSpec s = pointwise("parabolic.audit.z_fields", "printed Z_a = X_{M_a}, Z_b = X_{M_b}", suite, dom, Tier::custom,
                            SampleClass::full, [](const PhasePoint& p) {
                              const parabolic::ZFields z = parabolic::z_fields(p, g);
                              return Eval{std::max(z.audit_a, z.audit_b), {{"Z_a", z.audit_a}, {"Z_b", z.audit_b}}};
                            });
    s.kind = CheckKind::audit;
    s.custom_tolerance = 1e-6;
    s.finding = true;
    out.push_back(std::move(s));
  }
  out.push_back(pointwise("parabolic.z34.annihilates_H", "Z34(H) = {H, K34} = 0", suite, dom, Tier::exact,
                          SampleClass::reduced, [](const PhasePoint& p) {
                            const parabolic::ZFields z = parabolic::z_fields(p, g);
                            return value(
                                std::abs(z.Z34.cwiseProduct(as_complex(parabolic::hamiltonian(g).gradient(p))).sum()));
                          }));

  auto quasi = [&](std::string id, std::string ref, std::function<Eval(const PhasePoint&)> fn) {
    CheckSpec s = pointwise(std::move(id), std::move(ref), suite, dom, Tier::exact, SampleClass::full, std::move(fn));
    s.integrating_factor = "lambda";
    out.push_back(std::move(s));
  };
  quasi("parabolic.quasi_hamiltonian.complex", "i(Gamma) Omega_ab = i lambda d(M_a M_b*)", [](const PhasePoint& p) {
    const CVec4 lhs = interior_product(parabolic::gamma_field(g), parabolic::omega_field(g), p);
    return value(norm_inf(CVec4(lhs - kI * parabolic::lambda()(p) * parabolic::k34(g).gradient(p))));
  });
  quasi("parabolic.quasi_hamiltonian.real1", "i(Gamma) Omega_ab1 = -lambda dK4", [](const PhasePoint& p) {
    const CVec4 lhs = interior_product(parabolic::gamma_field(g), parabolic::omega1_field(g), p);
    return value(norm_inf(CVec4(lhs + parabolic::lambda()(p) * as_complex(parabolic::k4(g).gradient(p)))));
  });
  quasi("parabolic.quasi_hamiltonian.real2", "i(Gamma) Omega_ab2 = lambda dK3", [](const PhasePoint& p) {
    const CVec4 lhs = interior_product(parabolic::gamma_field(g), parabolic::omega2_field(g), p);
    return value(norm_inf(CVec4(lhs - parabolic::lambda()(p) * as_complex(parabolic::k3(g).gradient(p)))));
  });

  {
    CheckSpec s = pointwise("parabolic.audit.alpha_table", "printed alpha table (prefactor 2J/s^2) = Re(dM_a ^ dM_b*)",
                            suite, dom, Tier::audit, SampleClass::reduced,
                            [](const PhasePoint& p) { return table_audit(p, 'a'); });
    s.kind = CheckKind::audit;
    s.finding = true;
    out.push_back(std::move(s));
    CheckSpec t = pointwise("parabolic.audit.beta_table", "printed beta table (prefactor 2g/s^2) = Im(dM_a ^ dM_b*)", suite,
                            dom, Tier::audit, SampleClass::reduced,
                            [](const PhasePoint& p) { return table_audit(p, 'b'); });
    t.kind = CheckKind::audit;
    t.finding = true;
    out.push_back(std::move(t));
  }

  out.push_back(pointwise("parabolic.degeneracy.wedge",
                          "Omega_ab^Omega_ab = Omega_ab1^Omega_ab1 = Omega_ab2^Omega_ab2 = Omega_ab1^Omega_ab2 = 0", suite,
                          dom, Tier::strict, SampleClass::full, [](const PhasePoint& p) {
                            const FormCoeffs w = parabolic::omega_field(g).coeffs(p);
                            const FormCoeffs w1 = real_part(w);
                            const FormCoeffs w2 = imag_part(w);
                            Eval e;
                            e.parts = {{"Omega_ab^Omega_ab", std::abs(wedge22(w, w))},
                                       {"Omega_ab1^Omega_ab1", std::abs(wedge22(w1, w1))},
                                       {"Omega_ab2^Omega_ab2", std::abs(wedge22(w2, w2))},
                                       {"Omega_ab1^Omega_ab2", std::abs(wedge22(w1, w2))}};
                            for (const auto& [n, v] : e.parts) e.residual = std::max(e.residual, v);
                            return e;
                          }));
  {
    CheckSpec s = pointwise("parabolic.spectrum.det", "det R_ab1 = det R_ab2 = 0 and e3 = e4 = 0", suite, dom,
                            Tier::custom, SampleClass::reduced, [](const PhasePoint& p) { return spectral(p, false); },
                            "scaled by 1/|R|^4");
    s.custom_tolerance = 1e-9;
    out.push_back(std::move(s));
    CheckSpec t = pointwise("parabolic.spectrum.pairing", "e2 = (e1/2)^2, spectrum {0, 0, mu, mu}", suite, dom,
                            Tier::custom, SampleClass::reduced, [](const PhasePoint& p) { return spectral(p, true); },
                            "scaled by 1/max(1, |e2|)");
    t.custom_tolerance = 1e-8;
    out.push_back(std::move(t));
  }
  out.push_back(pointwise("parabolic.orthogonality", "Omega_ab1(Gamma, X_K4) = Omega_ab2(Gamma, X_K3) = 0", suite, dom,
                          Tier::exact, SampleClass::full, [](const PhasePoint& p) {
                            const CVec4 gam = parabolic::gamma_field(g)(p);
                            const CVec4 x3 = hamiltonian_vf(parabolic::k3(g))(p);
                            const CVec4 x4 = hamiltonian_vf(parabolic::k4(g))(p);
                            const Complex a = gam.transpose() * parabolic::omega1_field(g).matrix(p) * x4;
                            const Complex b = gam.transpose() * parabolic::omega2_field(g).matrix(p) * x3;
                            return value(std::max(std::abs(a), std::abs(b)));
                          }));

  out.push_back(pointwise("parabolic.lie.bracket_Z", "[Gamma, Z] = i K34 X_lambda", suite, dom, Tier::fd,
                          SampleClass::reduced, [](const PhasePoint& p) {
                            const CVec4 lhs = lie_bracket(parabolic::gamma_field(g), parabolic::z_field(g), p);
                            const Complex k = parabolic::k34(g).value(p);
                            const CVec4 rhs = kI * k * hamiltonian_vf(parabolic::lambda())(p);
                            return value(norm_inf(CVec4(lhs - rhs)) / (1.0 + std::abs(k)));
                          }, "scaled by 1/(1+|K34|)"));
  out.push_back(pointwise("parabolic.lie.Z", "L_Z omega0 = -Omega_ab", suite, dom, Tier::fd, SampleClass::reduced,
                          [](const PhasePoint& p) {
                            const CMat4 l = lie_derivative_2form(parabolic::z_field(g), canonical_form(ChartId::parabolic), p);
                            return value(norm_inf(CMat4(l + parabolic::omega_field(g).matrix(p))));
                          }));
  out.push_back(pointwise("parabolic.lie.Zprime", "L_Z' omega0 = Omega_ab", suite, dom, Tier::fd, SampleClass::reduced,
                          [](const PhasePoint& p) {
                            const CMat4 l =
                                lie_derivative_2form(parabolic::zprime_field(g), canonical_form(ChartId::parabolic), p);
                            return value(norm_inf(CMat4(l - parabolic::omega_field(g).matrix(p))));
                          }));
  out.push_back(pointwise("parabolic.kernel.invariance", "i([W, Gamma]) Omega_ab = 0 for kernel fields W", suite, dom,
                          Tier::fd, SampleClass::reduced,
                          [](const PhasePoint& p) { return kernel_invariance(parabolic::gamma_field(g), p); },
                          "kernel fields frozen at each sample; scaled by 1/|Omega_ab|"));
  out.push_back(pointwise(
      "parabolic.kernel.invariance_rescaled", "i([W, Gamma / lambda]) Omega_ab = 0 for kernel fields W", suite, dom,
      Tier::fd, SampleClass::reduced,
      [](const PhasePoint& p) {
        const ScalarField lam = parabolic::lambda();
        const VectorField gam = parabolic::gamma_field(g);
        const VectorField x{"Gamma/lambda", ChartId::parabolic,
                            [lam, gam](const PhasePoint& q) { return CVec4(gam(q) / lam(q)); }};
        return kernel_invariance(x, p);
      },
      "kernel fields frozen at each sample; scaled by 1/|Omega_ab|"));

  out.push_back(pointwise("parabolic.separable.reduces_to_Rx", "second integral with A = B = -g/2 equals Rx", suite, dom,
                          Tier::strict, SampleClass::full, [](const PhasePoint& p) {
                            const double j2 = parabolic::separable_second_integral(kepler_split, kepler_split, p);
                            const double rx = parabolic::rx(g)(p);
                            return value(std::abs(j2 - rx) / (1.0 + std::abs(rx)));
                          }, "scaled by 1/(1+|Rx|)"));
  out.push_back(pointwise(
      "parabolic.separable.conservation", "{J2, H_sep} = 0 for separable potentials", suite, dom, Tier::fd,
      SampleClass::reduced,
      [](const PhasePoint& p) {
        const auto bracket = [&p](const parabolic::Profile& a, const parabolic::Profile& b) {
          const Vec4 dj =
              fd_gradient([&](const PhasePoint& x) { return parabolic::separable_second_integral(a, b, x); }, p);
          const Vec4 dh = fd_gradient([&](const PhasePoint& x) { return parabolic::separable_hamiltonian(a, b, x); }, p);
          return std::abs(poisson_bracket(dj, dh));
        };
        const parabolic::Profile a = [](double x) { return -0.5 + 0.3 * x * x * x * x; };
        const parabolic::Profile b = [](double x) { return -0.5 + 0.1 * x * x; };
        Eval e;
        e.parts = {{"kepler", bracket(kepler_split, kepler_split)}, {"quartic_quadratic", bracket(a, b)}};
        e.residual = std::max(e.parts[0].second, e.parts[1].second);
        return e;
      },
      "gradients by central differences"));
  return out;
}

}  // namespace kqbh
