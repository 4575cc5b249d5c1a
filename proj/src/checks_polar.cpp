#include <cmath>
#include <numbers>

#include "check_util.hpp"
#include "kqbh/polar.hpp"

namespace kqbh {

namespace {

using namespace checks;

constexpr double g = 1.0;
constexpr double alpha0 = 1.0;

const ComplexObservable& ham_c() {
  static const ComplexObservable h = real_observable(polar::hamiltonian(g));
  return h;
}

Eval rotation(const ComplexObservable& m, const ComplexObservable& h, double rate, const PhasePoint& p) {
  const Complex v = m.value(p);
  const double lam = polar::lambda()(p);
  return value(std::abs(poisson_bracket(m, h, p) - rate * kI * lam * v) / (1.0 + std::abs(v)));
}

Eval table_audit(const polar::CoefficientTable& t, const FormCoeffs& truth, const char* prefix) {
  const FormCoeffs printed = polar::table_form(t);
  Eval e;
  // slots dr^dphi, dphi^dp_r, dphi^dp_phi carry the table; the rest must be empty
  const std::pair<int, const char*> slots[] = {{0, "12"}, {3, "23"}, {4, "24"}, {1, "13"}, {2, "14"}, {5, "34"}};
  for (const auto& [slot, name] : slots) {
    const double r = std::abs(printed[slot] - truth[slot]);
    e.residual = std::max(e.residual, r);
    e.parts.emplace_back(std::string(prefix) + name, r);
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

/// |i([W, X]) Omega| / |Omega| over both printed kernel fields.
Eval kernel_invariance(const VectorField& x, const PhasePoint& p) {
  const CMat4 omega = polar::omega_field(g).matrix(p);
  const double scale = norm_inf(omega);
  Eval e;
  for (int k = 0; k < 2; ++k) {
    const VectorField w = polar::kernel_field(k);
    const double r = norm_inf(CVec4(interior_product(lie_bracket(w, x, p), omega))) / scale;
    e.residual = std::max(e.residual, r);
    e.parts.emplace_back(w.name, r);
  }
  return e;
}

Eval spectral(const PhasePoint& p, bool pairing) {
  const polar::Recursions rec = polar::recursions(p, g);
  Eval e;
  for (const auto& [r, s, name] : {std::tuple{rec.R1, rec.spectrum1, "R1"}, std::tuple{rec.R2, rec.spectrum2, "R2"}}) {
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

Outcome nijenhuis_witness(bool first) {
  const PhasePoint p = PhasePoint::make(ChartId::polar, 1.0, std::numbers::pi / 2, 0.5, 1.0);
  const TensorField r = [first](const PhasePoint& x) -> CMat4 {
    const polar::Recursions rec = polar::recursions(x, g);
    return (first ? rec.R1 : rec.R2).cast<Complex>();
  };
  const auto [n, arg] = max_torsion(r, p);
  Outcome o;
  o.residual = n > 0.0 ? 1e-3 / n : std::numeric_limits<double>::infinity();
  o.worst_point = p;
  o.notes.push_back("max |N_R| = " + fmt(n) + " at " + arg);
  return o;
}

}  // namespace

std::vector<CheckSpec> polar_checks() {
  const std::string suite = "polar";
  std::vector<CheckSpec> out;

  out.push_back(pointwise("polar.bracket.Mr", "{M_r, H} = i lambda M_r", suite, DomainId::polar, Tier::exact,
                          SampleClass::full, [](const PhasePoint& p) { return rotation(polar::m_r(g), ham_c(), 1.0, p); },
                          "scaled by 1/(1+|M_r|)"));
  out.push_back(pointwise("polar.bracket.Nphi", "{N_phi, H} = i lambda N_phi", suite, DomainId::polar, Tier::exact,
                          SampleClass::full, [](const PhasePoint& p) { return rotation(polar::n_phi(), ham_c(), 1.0, p); },
                          "scaled by 1/(1+|N_phi|)"));
  out.push_back(pointwise("polar.integral.J3", "{J3, H} = 0", suite, DomainId::polar, Tier::exact, SampleClass::full,
                          [](const PhasePoint& p) {
                            const ScalarField h = polar::hamiltonian(g);
                            return value(std::abs(poisson_bracket(polar::j3(g), h, p)) / (1.0 + std::abs(h(p))));
                          }, "scaled by 1/(1+|H|)"));
  out.push_back(pointwise("polar.integral.J4", "{J4, H} = 0", suite, DomainId::polar, Tier::exact, SampleClass::full,
                          [](const PhasePoint& p) {
                            const ScalarField h = polar::hamiltonian(g);
                            return value(std::abs(poisson_bracket(polar::j4(g), h, p)) / (1.0 + std::abs(h(p))));
                          }, "scaled by 1/(1+|H|)"));
  out.push_back(pointwise("polar.integral.pphi", "{p_phi, H} = 0", suite, DomainId::polar, Tier::exact,
                          SampleClass::full, [](const PhasePoint& p) {
                            return value(std::abs(poisson_bracket(polar::angular_momentum(), polar::hamiltonian(g), p)));
                          }));
  out.push_back(pointwise("polar.record.modulus", "|M_r|^2 = 2 p_phi^2 H + g^2, |N_phi| = 1, J34 = M_r N_phi*", suite,
                          DomainId::polar, Tier::strict, SampleClass::full, [](const PhasePoint& p) {
                            const polar::Observables o = polar::observables(p, g);
                            Eval e;
                            e.parts = {{"modM2", std::abs(o.modM2 - (2.0 * p.p2() * p.p2() * o.H + g * g)) / (1.0 + o.modM2)},
                                       {"N_phi", std::abs(std::abs(o.N_phi) - 1.0)},
                                       {"J34", std::abs(o.J34 - o.M_r * std::conj(o.N_phi)) / (1.0 + std::abs(o.J34))}};
                            for (const auto& [n, v] : e.parts) e.residual = std::max(e.residual, v);
                            return e;
                          }, "modM2 and J34 scaled by 1/(1+|value|)"));
  out.push_back(pointwise("polar.gamma.defining", "i(Gamma) omega0 = dH", suite, DomainId::polar, Tier::strict,
                          SampleClass::full, [](const PhasePoint& p) {
                            const CVec4 lhs = interior_product(polar::gamma_field(g), canonical_form(ChartId::polar), p);
                            return value(norm_inf(CVec4(lhs - as_complex(polar::hamiltonian(g).gradient(p)))));
                          }));
  out.push_back(pointwise("polar.audit.y_fields", "printed Y_r = X_{M_r}, Y_phi = X_{N_phi}", suite, DomainId::polar,
                          Tier::exact, SampleClass::full,
                          [](const PhasePoint& p) { return value(polar::y_fields(p, g).audit_residual); }));
  out.push_back(pointwise("polar.y34.annihilates_H", "Y34(H) = {H, J34} = 0", suite, DomainId::polar, Tier::exact,
                          SampleClass::reduced, [](const PhasePoint& p) {
                            const polar::YFields y = polar::y_fields(p, g);
                            return value(std::abs(y.Y34.cwiseProduct(as_complex(polar::hamiltonian(g).gradient(p))).sum()));
                          }));

  auto quasi = [&](std::string id, std::string ref, std::function<Eval(const PhasePoint&)> fn) {
    CheckSpec s = pointwise(std::move(id), std::move(ref), suite, DomainId::polar, Tier::exact, SampleClass::full,
                            std::move(fn));
    s.integrating_factor = "lambda";
    out.push_back(std::move(s));
  };
  quasi("polar.quasi_hamiltonian.complex", "i(Gamma) Omega = i lambda d(M_r N_phi*)", [](const PhasePoint& p) {
    const CVec4 lhs = interior_product(polar::gamma_field(g), polar::omega_field(g), p);
    return value(norm_inf(CVec4(lhs - kI * polar::lambda()(p) * polar::j34(g).gradient(p))));
  });
  quasi("polar.quasi_hamiltonian.real1", "i(Gamma) Omega1 = -lambda dJ4", [](const PhasePoint& p) {
    const CVec4 lhs = interior_product(polar::gamma_field(g), polar::omega1_field(g), p);
    return value(norm_inf(CVec4(lhs + polar::lambda()(p) * as_complex(polar::j4(g).gradient(p)))));
  });
  quasi("polar.quasi_hamiltonian.real2", "i(Gamma) Omega2 = lambda dJ3", [](const PhasePoint& p) {
    const CVec4 lhs = interior_product(polar::gamma_field(g), polar::omega2_field(g), p);
    return value(norm_inf(CVec4(lhs - polar::lambda()(p) * as_complex(polar::j3(g).gradient(p)))));
  });

  out.push_back(pointwise("polar.degeneracy.wedge", "Omega^Omega = Omega1^Omega1 = Omega2^Omega2 = Omega1^Omega2 = 0", suite,
                          DomainId::polar, Tier::strict, SampleClass::full, [](const PhasePoint& p) {
                            const FormCoeffs w = polar::omega_field(g).coeffs(p);
                            const FormCoeffs w1 = real_part(w);
                            const FormCoeffs w2 = imag_part(w);
                            Eval e;
                            e.parts = {{"Omega^Omega", std::abs(wedge22(w, w))},
                                       {"Omega1^Omega1", std::abs(wedge22(w1, w1))},
                                       {"Omega2^Omega2", std::abs(wedge22(w2, w2))},
                                       {"Omega1^Omega2", std::abs(wedge22(w1, w2))}};
                            for (const auto& [n, v] : e.parts) e.residual = std::max(e.residual, v);
                            return e;
                          }));
  {
    CheckSpec s = pointwise("polar.spectrum.det", "det R1 = det R2 = 0 and e3 = e4 = 0", suite, DomainId::polar,
                            Tier::custom, SampleClass::reduced, [](const PhasePoint& p) { return spectral(p, false); },
                            "scaled by 1/|R|^4");
    s.custom_tolerance = 1e-9;
    out.push_back(std::move(s));
    CheckSpec t = pointwise("polar.spectrum.pairing", "e2 = (e1/2)^2, spectrum {0, 0, mu, mu}", suite, DomainId::polar,
                            Tier::custom, SampleClass::reduced, [](const PhasePoint& p) { return spectral(p, true); },
                            "scaled by 1/max(1, |e2|)");
    t.custom_tolerance = 1e-8;
    out.push_back(std::move(t));
  }

  out.push_back(pointwise("polar.audit.alpha_table", "printed alpha table = Re(dM_r ^ dN_phi*)", suite, DomainId::polar,
                          Tier::audit, SampleClass::reduced, [](const PhasePoint& p) {
                            return table_audit(polar::alpha(p), real_part(polar::omega_field(g).coeffs(p)), "alpha");
                          }));
  out.push_back(pointwise("polar.audit.beta_table", "printed beta table = Im(dM_r ^ dN_phi*)", suite, DomainId::polar,
                          Tier::audit, SampleClass::reduced, [](const PhasePoint& p) {
                            return table_audit(polar::beta(p), imag_part(polar::omega_field(g).coeffs(p)), "beta");
                          }));
  out.push_back(pointwise("polar.audit.recursion", "printed R1, R2 = recursion_from_forms(Omega1, Omega2)", suite,
                          DomainId::polar, Tier::audit, SampleClass::reduced,
                          [](const PhasePoint& p) { return value(polar::recursions(p, g).audit_residual); }));
  out.push_back(pointwise("polar.audit.kernel", "printed Z1, Z2 annihilate Omega and span kernel_basis(Omega)", suite,
                          DomainId::polar, Tier::audit, SampleClass::reduced, [](const PhasePoint& p) {
                            const CMat4 omega = polar::omega_field(g).matrix(p);
                            const auto [z1, z2] = polar::kernel(p, g);
                            const auto basis = kernel_basis(omega);
                            Eval e;
                            double ann = 0.0;
                            double span = 1.0;
                            for (const CVec4& z : {z1, z2}) ann = std::max(ann, norm_inf(CVec4(interior_product(z, omega))));
                            ann /= norm_inf(omega);
                            if (basis.size() == 2) {
                              Eigen::Matrix<Complex, 4, 2> q;
                              q.col(0) = basis[0];
                              q.col(1) = basis[1];
                              span = 0.0;
                              for (const CVec4& z : {z1, z2}) span = std::max(span, (z - q * (q.adjoint() * z)).norm() / z.norm());
                            }
                            e.parts = {{"annihilation", ann}, {"span", span}};
                            e.residual = std::max(ann, span);
                            return e;
                          }, "annihilation scaled by 1/|Omega|, span by 1/|Z|"));
  {
    CheckSpec s = pointwise("polar.audit.j4_display", "displayed J4 expansion = Im(M_r N_phi*)", suite, DomainId::polar,
                            Tier::strict, SampleClass::full, [](const PhasePoint& p) {
                              const double r = std::abs(polar::j4_displayed(p, g) - polar::j4(g)(p));
                              return Eval{r, {{"J4_displayed", r}}};
                            });
    s.kind = CheckKind::audit;
    s.finding = true;
    out.push_back(std::move(s));
  }
  out.push_back(pointwise("polar.audit.j4_sign_flip", "displayed J4 expansion = -Im(M_r N_phi*)", suite, DomainId::polar,
                          Tier::strict, SampleClass::full, [](const PhasePoint& p) {
                            return value(std::abs(polar::j4_displayed(p, g) + polar::j4(g)(p)));
                          }));
  for (auto& c : out) {
    if (c.id.starts_with("polar.audit.")) c.kind = CheckKind::audit;
  }

  out.push_back(pointwise("polar.lie.bracket_Y", "[Gamma, Y] = i J34 X_lambda", suite, DomainId::polar, Tier::fd,
                          SampleClass::reduced, [](const PhasePoint& p) {
                            const CVec4 lhs = lie_bracket(polar::gamma_field(g), polar::y_field(g), p);
                            const Complex j = polar::j34(g).value(p);
                            const CVec4 rhs = kI * j * hamiltonian_vf(polar::lambda())(p);
                            return value(norm_inf(CVec4(lhs - rhs)) / (1.0 + std::abs(j)));
                          }, "scaled by 1/(1+|J34|)"));
  out.push_back(pointwise("polar.lie.Y", "L_Y omega0 = -Omega", suite, DomainId::polar, Tier::fd, SampleClass::reduced,
                          [](const PhasePoint& p) {
                            const CMat4 l = lie_derivative_2form(polar::y_field(g), canonical_form(ChartId::polar), p);
                            return value(norm_inf(CMat4(l + polar::omega_field(g).matrix(p))));
                          }));
  out.push_back(pointwise("polar.lie.Yprime", "L_Y' omega0 = Omega", suite, DomainId::polar, Tier::fd,
                          SampleClass::reduced, [](const PhasePoint& p) {
                            const CMat4 l = lie_derivative_2form(polar::yprime_field(g), canonical_form(ChartId::polar), p);
                            return value(norm_inf(CMat4(l - polar::omega_field(g).matrix(p))));
                          }));
  out.push_back(pointwise("polar.kernel.invariance", "i([W, Gamma]) Omega = 0 for W = Z1, Z2", suite, DomainId::polar,
                          Tier::fd, SampleClass::reduced,
                          [](const PhasePoint& p) { return kernel_invariance(polar::gamma_field(g), p); },
                          "scaled by 1/|Omega|"));
  out.push_back(pointwise(
      "polar.kernel.invariance_rescaled", "i([W, Gamma / lambda]) Omega = 0 for W = Z1, Z2", suite, DomainId::polar,
      Tier::fd, SampleClass::reduced,
      [](const PhasePoint& p) {
        const ScalarField lam = polar::lambda();
        const VectorField gam = polar::gamma_field(g);
        const VectorField x{"Gamma/lambda", ChartId::polar,
                            [lam, gam](const PhasePoint& q) { return CVec4(gam(q) / lam(q)); }};
        return kernel_invariance(x, p);
      },
      "scaled by 1/|Omega|"));
  out.push_back(pointwise("polar.orthogonality", "Omega1(Gamma, X_J4) = Omega2(Gamma, X_J3) = 0", suite, DomainId::polar,
                          Tier::exact, SampleClass::full, [](const PhasePoint& p) {
                            const CVec4 gam = polar::gamma_field(g)(p);
                            const CVec4 y3 = hamiltonian_vf(polar::j3(g))(p);
                            const CVec4 y4 = hamiltonian_vf(polar::j4(g))(p);
                            const Complex a = gam.transpose() * polar::omega1_field(g).matrix(p) * y4;
                            const Complex b = gam.transpose() * polar::omega2_field(g).matrix(p) * y3;
                            return value(std::max(std::abs(a), std::abs(b)));
                          }));
  out.push_back(single("polar.nijenhuis.R1", "max over coordinate pairs |N_R1| > 1e-3 at (1, pi/2, 0.5, 1)", suite,
                       CheckKind::witness, Tier::custom, 1.0, [] { return nijenhuis_witness(true); },
                       "residual is 1e-3 / max |N_R|"));
  out.push_back(single("polar.nijenhuis.R2", "max over coordinate pairs |N_R2| > 1e-3 at (1, pi/2, 0.5, 1)", suite,
                       CheckKind::witness, Tier::custom, 1.0, [] { return nijenhuis_witness(false); },
                       "residual is 1e-3 / max |N_R|"));

  out.push_back(pointwise("polar.oscillator.bracket", "{M_r, H_HO} = 2 i lambda M_r", suite, DomainId::polar,
                          Tier::exact, SampleClass::full, [](const PhasePoint& p) {
                            static const ComplexObservable h = real_observable(polar::oscillator_hamiltonian(alpha0));
                            return rotation(polar::oscillator_m_r(alpha0), h, 2.0, p);
                          }, "scaled by 1/(1+|M_r|)"));
  out.push_back(pointwise("polar.oscillator.fradkin", "{M_r (N_phi*)^2, H_HO} = 0", suite, DomainId::polar, Tier::exact,
                          SampleClass::full, [](const PhasePoint& p) {
                            static const ComplexObservable h = real_observable(polar::oscillator_hamiltonian(alpha0));
                            const Complex f = polar::fradkin(alpha0).value(p);
                            return value(std::abs(poisson_bracket(polar::fradkin(alpha0), h, p)) / (1.0 + std::abs(f)));
                          }, "scaled by 1/(1+|F|)"));
  return out;
}

}  // namespace kqbh
