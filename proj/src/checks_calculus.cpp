#include "check_util.hpp"
#include "kqbh/parabolic.hpp"
#include "kqbh/polar.hpp"

namespace kqbh {

namespace {

using namespace checks;

constexpr double g = 1.0;

std::vector<ScalarField> polar_fields() {
  return {polar::hamiltonian(g), polar::lambda(),   polar::angular_momentum(), polar::m_r(g).re,
          polar::m_r(g).im,      polar::n_phi().re, polar::n_phi().im,         polar::j3(g),
          polar::j4(g),          polar::oscillator_hamiltonian(1.0),            polar::oscillator_m_r(1.0).re,
          polar::oscillator_m_r(1.0).im,            polar::fradkin(1.0).re,     polar::fradkin(1.0).im};
}

std::vector<ScalarField> parabolic_fields() {
  return {parabolic::hamiltonian(g), parabolic::lambda(), parabolic::angular_momentum(), parabolic::px(),
          parabolic::py(),           parabolic::rx(g),    parabolic::m_a(g).re,          parabolic::m_a(g).im,
          parabolic::m_b(g).re,      parabolic::m_b(g).im, parabolic::k3(g),             parabolic::k4(g)};
}

Eval roundtrip(const PhasePoint& p, ChartId target) {
  const PhasePoint x = to_cartesian(p);
  const PhasePoint back = to_cartesian(from_cartesian(x, target));
  double r = 0.0;
  for (int k = 0; k < 4; ++k) r = std::max(r, std::abs(back[k] - x[k]) / (1.0 + std::abs(x[k])));
  return value(r);
}

Eval lift_symplectic(const PhasePoint& p) {
  Mat4 jac;
  for (int k = 0; k < 4; ++k) {
    const double h = fd_step(p[k]);
    Vec4 plus = p.coords();
    Vec4 minus = p.coords();
    plus[k] += h;
    minus[k] -= h;
    const Vec4 fp = transport(PhasePoint::make(p.chart(), plus), ChartId::parabolic).coords();
    const Vec4 fm = transport(PhasePoint::make(p.chart(), minus), ChartId::parabolic).coords();
    jac.col(k) = (fp - fm) / (2.0 * h);
  }
  return value(max_abs(Mat4(jac.transpose() * canonical_matrix() * jac - canonical_matrix())));
}

}  // namespace

std::vector<CheckSpec> calculus_checks() {
  const std::string suite = "calculus";
  std::vector<CheckSpec> out;

  out.push_back(pointwise("charts.roundtrip.polar", "to_cartesian(from_cartesian(x, polar)) = x", suite, DomainId::polar,
                          Tier::strict, SampleClass::full, [](const PhasePoint& p) { return roundtrip(p, ChartId::polar); },
                          "componentwise, scaled by 1/(1+|x|)"));
  out.push_back(pointwise("charts.roundtrip.parabolic", "to_cartesian(from_cartesian(x, parabolic)) = x", suite,
                          DomainId::parabolic, Tier::strict, SampleClass::full,
                          [](const PhasePoint& p) { return roundtrip(p, ChartId::parabolic); },
                          "componentwise, scaled by 1/(1+|x|)"));
  out.push_back(pointwise("charts.lift.symplectic", "J^T Omega0 J = Omega0 for the polar -> parabolic transport", suite,
                          DomainId::polar, Tier::audit, SampleClass::reduced, lift_symplectic,
                          "Jacobian by central differences"));
  out.push_back(pointwise(
      "charts.cross_chart.hamiltonian", "H_polar(x; g) = H_parabolic(T x; 2g)", suite, DomainId::polar, Tier::strict,
      SampleClass::reduced,
      [](const PhasePoint& p) {
        const double h1 = polar::hamiltonian(g)(p);
        const double h2 = parabolic::hamiltonian(map_coupling(g, ChartId::polar, ChartId::parabolic))(
            transport(p, ChartId::parabolic));
        return value(std::abs(h1 - h2) / std::max(1.0, std::abs(h1)));
      },
      "scaled by 1/max(1, |H|)"));
  out.push_back(pointwise("charts.cross_chart.angular_momentum", "a p_b - b p_a = 2 p_phi at T x", suite,
                          DomainId::polar, Tier::strict, SampleClass::reduced, [](const PhasePoint& p) {
                            const PhasePoint q = transport(p, ChartId::parabolic);
                            return value(std::abs(parabolic::angular_momentum()(q) - 2.0 * p.p2()));
                          }));

  out.push_back(pointwise("calculus.bracket.antisymmetry", "{f, g} + {g, f} = 0", suite, DomainId::polar, Tier::strict,
                          SampleClass::full, [](const PhasePoint& p) {
                            static const std::vector<ScalarField> fs = polar_fields();
                            double r = 0.0;
                            for (const auto& f : fs) {
                              for (const auto& h : fs) r = std::max(r, std::abs(poisson_bracket(f, h, p) + poisson_bracket(h, f, p)));
                            }
                            return value(r);
                          }));
  out.push_back(pointwise("calculus.bracket.leibniz", "{f g, h} = f {g, h} + g {f, h}, f = J3, g = p_phi, h = H", suite,
                          DomainId::polar, Tier::exact, SampleClass::full, [](const PhasePoint& p) {
                            const ScalarField f = polar::j3(g);
                            const ScalarField k = polar::angular_momentum();
                            const ScalarField h = polar::hamiltonian(g);
                            const double lhs = poisson_bracket(product(f, k), h, p);
                            const double rhs = f(p) * poisson_bracket(k, h, p) + k(p) * poisson_bracket(f, h, p);
                            return value(std::abs(lhs - rhs));
                          }));
  out.push_back(pointwise(
      "calculus.bracket.jacobi", "{H, {J3, p_phi}} + {J3, {p_phi, H}} + {p_phi, {H, J3}} = 0", suite, DomainId::polar,
      Tier::fd, SampleClass::reduced,
      [](const PhasePoint& p) {
        const ScalarField h = polar::hamiltonian(g);
        const ScalarField j = polar::j3(g);
        const ScalarField k = polar::angular_momentum();
        return value(std::abs(poisson_bracket(h, bracket_field(j, k), p) + poisson_bracket(j, bracket_field(k, h), p) +
                              poisson_bracket(k, bracket_field(h, j), p)));
      },
      "inner brackets differentiated by central differences"));
  out.push_back(pointwise("calculus.hvf.defining", "i(X_f) omega0 = df for every polar observable", suite, DomainId::polar,
                          Tier::strict, SampleClass::full, [](const PhasePoint& p) {
                            static const std::vector<ScalarField> fs = polar_fields();
                            static const TwoFormField w0 = canonical_form(ChartId::polar);
                            double r = 0.0;
                            for (const auto& f : fs) {
                              r = std::max(r, norm_inf(CVec4(interior_product(hamiltonian_vf(f), w0, p) - as_complex(f.gradient(p)))));
                            }
                            return value(r);
                          }));
  out.push_back(pointwise("calculus.form.antisymmetry", "A + A^T = 0 for evaluated 2-forms", suite, DomainId::polar,
                          Tier::strict, SampleClass::full, [](const PhasePoint& p) {
                            const CMat4 a = polar::omega_field(g).matrix(p);
                            return value(norm_inf(CMat4(a + a.transpose())));
                          }));
  out.push_back(pointwise("calculus.wedge22.symmetry", "W1 ^ W2 = W2 ^ W1 for 2-forms", suite, DomainId::polar,
                          Tier::strict, SampleClass::full, [](const PhasePoint& p) {
                            const FormCoeffs a = polar::omega_field(g).coeffs(p);
                            const FormCoeffs b = canonical_form(ChartId::polar).coeffs(p);
                            const FormCoeffs c = polar::omega1_field(g).coeffs(p);
                            const double r = std::max({std::abs(wedge22(a, b) - wedge22(b, a)),
                                                       std::abs(wedge22(a, c) - wedge22(c, a)),
                                                       std::abs(wedge22(b, c) - wedge22(c, b))});
                            return value(r);
                          }));
  out.push_back(single("calculus.recursion.identity", "recursion_from_forms(omega0) = I", suite, CheckKind::witness,
                       Tier::strict, 0.0, [] {
                         const PhasePoint p = PhasePoint::make(ChartId::polar, 1.0, 0.0, 0.0, 1.0);
                         Outcome o;
                         o.residual = norm_inf(CMat4(recursion_from_forms(canonical_form(ChartId::polar), p) -
                                                     CMat4::Identity()));
                         o.worst_point = p;
                         return o;
                       }));
  out.push_back(pointwise("calculus.kernel.annihilation", "|A v| <= 1e-10 |A| for kernel_basis(Omega), dim 2", suite,
                          DomainId::polar, Tier::exact, SampleClass::full, [](const PhasePoint& p) {
                            const CMat4 a = polar::omega_field(g).matrix(p);
                            const auto basis = kernel_basis(a);
                            if (basis.size() != 2) return value(1.0);
                            double r = 0.0;
                            for (const auto& v : basis) r = std::max(r, norm_inf(CVec4(a * v)) / norm_inf(a));
                            return value(r);
                          }, "scaled by 1/|Omega|; residual 1 when the kernel is not two-dimensional"));
  out.push_back(pointwise("calculus.gradient.polar", "exact gradients = central differences, polar observables", suite,
                          DomainId::polar, Tier::fd, SampleClass::reduced, [](const PhasePoint& p) {
                            static const std::vector<ScalarField> fs = polar_fields();
                            Eval e;
                            for (const auto& f : fs) {
                              const double r = validate_gradient(f, p);
                              e.residual = std::max(e.residual, r);
                              e.parts.emplace_back(f.name, r);
                            }
                            return e;
                          }, "relative: |exact - fd| / (1 + |exact|)"));
  out.push_back(pointwise("calculus.gradient.parabolic", "exact gradients = central differences, parabolic observables",
                          suite, DomainId::parabolic, Tier::fd, SampleClass::reduced, [](const PhasePoint& p) {
                            static const std::vector<ScalarField> fs = parabolic_fields();
                            Eval e;
                            for (const auto& f : fs) {
                              const double r = validate_gradient(f, p);
                              e.residual = std::max(e.residual, r);
                              e.parts.emplace_back(f.name, r);
                            }
                            return e;
                          }, "relative: |exact - fd| / (1 + |exact|)"));
  out.push_back(pointwise("calculus.exterior.closed", "d Omega1 = d Omega2 = 0", suite, DomainId::polar, Tier::fd,
                          SampleClass::reduced, [](const PhasePoint& p) {
                            double r = 0.0;
                            for (const auto& w : {polar::omega1_field(g), polar::omega2_field(g)}) {
                              for (const Complex& c : exterior_derivative(w, p)) r = std::max(r, std::abs(c));
                            }
                            return value(r);
                          }));
  out.push_back(pointwise("calculus.lie.hamiltonian_preserves", "L_Gamma omega0 = 0", suite, DomainId::polar, Tier::fd,
                          SampleClass::reduced, [](const PhasePoint& p) {
                            return value(norm_inf(lie_derivative_2form(polar::gamma_field(g), canonical_form(ChartId::polar), p)));
                          }));
  return out;
}

}  // namespace kqbh
