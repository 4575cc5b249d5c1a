#include "kqbh/polar.hpp"

#include <cmath>
#include <string>

namespace kqbh::polar {

namespace {

constexpr ChartId kChart = ChartId::polar;

void require_polar(const PhasePoint& pt) {
  if (pt.chart() != kChart) throw ChartMismatch("expected a polar point, got " + std::string(to_string(pt.chart())));
}

const Complex I{0.0, 1.0};

}  // namespace

ScalarField hamiltonian(double g) {
  return {"H", kChart,
          [g](const PhasePoint& pt) {
            const double r = pt.q1();
            return 0.5 * (pt.p1() * pt.p1() + pt.p2() * pt.p2() / (r * r)) - g / r;
          },
          [g](const PhasePoint& pt) {
            const double r = pt.q1();
            const double pphi = pt.p2();
            return Vec4(-pphi * pphi / (r * r * r) + g / (r * r), 0.0, pt.p1(), pphi / (r * r));
          }};
}

ScalarField lambda() {
  return {"lambda", kChart, [](const PhasePoint& pt) { return pt.p2() / (pt.q1() * pt.q1()); },
          [](const PhasePoint& pt) {
            const double r = pt.q1();
            return Vec4(-2.0 * pt.p2() / (r * r * r), 0.0, 0.0, 1.0 / (r * r));
          }};
}

ScalarField angular_momentum() {
  ScalarField f = coordinate_field(kChart, 3);
  f.name = "J2";
  return f;
}

ComplexObservable m_r(double g) {
  ScalarField re{"M_r1", kChart, [](const PhasePoint& pt) { return pt.p1() * pt.p2(); },
                 [](const PhasePoint& pt) { return Vec4(0.0, 0.0, pt.p2(), pt.p1()); }};
  ScalarField im{"M_r2", kChart,
                 [g](const PhasePoint& pt) { return g - pt.p2() * pt.p2() / pt.q1(); },
                 [](const PhasePoint& pt) {
                   const double r = pt.q1();
                   const double pphi = pt.p2();
                   return Vec4(pphi * pphi / (r * r), 0.0, 0.0, -2.0 * pphi / r);
                 }};
  return {re, im};
}

ComplexObservable n_phi() {
  ScalarField re{"N_phi1", kChart, [](const PhasePoint& pt) { return std::cos(pt.q2()); },
                 [](const PhasePoint& pt) { return Vec4(0.0, -std::sin(pt.q2()), 0.0, 0.0); }};
  ScalarField im{"N_phi2", kChart, [](const PhasePoint& pt) { return std::sin(pt.q2()); },
                 [](const PhasePoint& pt) { return Vec4(0.0, std::cos(pt.q2()), 0.0, 0.0); }};
  return {re, im};
}

ComplexObservable j34(double g) {
  ComplexObservable j = product(m_r(g), conj(n_phi()));
  j.re.name = "J3";
  j.im.name = "J4";
  return j;
}

ScalarField j3(double g) { return j34(g).re; }
ScalarField j4(double g) { return j34(g).im; }

double j4_displayed(const PhasePoint& pt, double g) {
  require_polar(pt);
  const double r = pt.q1();
  const double phi = pt.q2();
  const double pr = pt.p1();
  const double pphi = pt.p2();
  return pr * pphi * std::sin(phi) + (pphi * pphi / r) * std::cos(phi) - g * std::cos(phi);
}

Observables observables(const PhasePoint& pt, double g) {
  require_polar(pt);
  Observables o{};
  o.H = hamiltonian(g).value(pt);
  o.lambda = lambda().value(pt);
  o.M_r = m_r(g).value(pt);
  o.N_phi = n_phi().value(pt);
  o.J2 = pt.p2();
  o.J34 = o.M_r * std::conj(o.N_phi);
  o.J3 = o.J34.real();
  o.J4 = o.J34.imag();
  o.modM2 = std::norm(o.M_r);
  return o;
}

Vec4 gamma(const PhasePoint& pt, double g) {
  require_polar(pt);
  return gamma_field(g).value(pt).real();
}

VectorField gamma_field(double g) {
  VectorField f = hamiltonian_vf(hamiltonian(g));
  f.name = "Gamma_K";
  return f;
}

CVec4 y_r(const PhasePoint& pt) {
  require_polar(pt);
  const double r = pt.q1();
  const double pr = pt.p1();
  const double pphi = pt.p2();
  return CVec4(pphi, pr - 2.0 * I * pphi / r, -I * (pphi * pphi / (r * r)), 0.0);
}

CVec4 y_phi(const PhasePoint& pt) {
  require_polar(pt);
  const double phi = pt.q2();
  return CVec4(0.0, 0.0, 0.0, std::sin(phi) - I * std::cos(phi));
}

YFields y_fields(const PhasePoint& pt, double g) {
  require_polar(pt);
  YFields y{};
  const Complex mr = m_r(g).value(pt);
  const Complex n = n_phi().value(pt);
  y.Y_r = y_r(pt);
  y.Y_phi = y_phi(pt);
  y.Y = std::conj(n) * y.Y_r;
  y.Yprime = mr * y.Y_phi.conjugate();
  y.Y34 = y.Y + y.Yprime;
  y.Y3 = hamiltonian_vf(j3(g)).value(pt).real();
  y.Y4 = hamiltonian_vf(j4(g)).value(pt).real();
  const double audit_r = max_abs(CVec4(y.Y_r - hamiltonian_vf(m_r(g)).value(pt)));
  const double audit_phi = max_abs(CVec4(y.Y_phi - hamiltonian_vf(n_phi()).value(pt)));
  y.audit_residual = std::max(audit_r, audit_phi);
  return y;
}

VectorField y_field(double g) {
  (void)g;
  return {"Y", kChart, [](const PhasePoint& pt) {
            return CVec4(std::conj(Complex(std::cos(pt.q2()), std::sin(pt.q2()))) * y_r(pt));
          }};
}

VectorField yprime_field(double g) {
  const ComplexObservable mr = m_r(g);
  return {"Y'", kChart, [mr](const PhasePoint& pt) { return CVec4(mr.value(pt) * y_phi(pt).conjugate()); }};
}

CoefficientTable alpha(const PhasePoint& pt) {
  require_polar(pt);
  const double r = pt.q1();
  const double c = std::cos(pt.q2());
  const double s = std::sin(pt.q2());
  const double pr = pt.p1();
  const double pphi = pt.p2();
  return {(pphi * pphi / (r * r)) * c, pphi * s, pr * s + 2.0 * (pphi / r) * c};
}

CoefficientTable beta(const PhasePoint& pt) {
  require_polar(pt);
  const double r = pt.q1();
  const double c = std::cos(pt.q2());
  const double s = std::sin(pt.q2());
  const double pr = pt.p1();
  const double pphi = pt.p2();
  return {-(pphi * pphi / (r * r)) * s, pphi * c, pr * c - 2.0 * (pphi / r) * s};
}

FormCoeffs table_form(const CoefficientTable& t) {
  FormCoeffs c{};
  c[0] = t.c12;  // dr^dphi
  c[3] = t.c23;  // dphi^dp_r
  c[4] = t.c24;  // dphi^dp_phi
  return c;
}

Forms forms(const PhasePoint& pt, double g) {
  require_polar(pt);
  Forms f{};
  f.Omega1 = table_form(alpha(pt));
  f.Omega2 = table_form(beta(pt));
  for (std::size_t s = 0; s < f.Omega.size(); ++s) f.Omega[s] = f.Omega1[s] + I * f.Omega2[s];
  const FormCoeffs truth = omega_field(g).coeffs(pt);
  double worst = 0.0;
  for (std::size_t s = 0; s < truth.size(); ++s) worst = std::max(worst, std::abs(truth[s] - f.Omega[s]));
  f.audit_residual = worst;
  return f;
}

TwoFormField omega_field(double g) {
  TwoFormField w = build_wedge_form(m_r(g), n_phi(), true);
  w.name = "Omega";
  return w;
}

namespace {

TwoFormField part_of(const TwoFormField& w, bool imaginary, std::string name) {
  return {std::move(name), w.chart, [w, imaginary](const PhasePoint& pt) {
            FormCoeffs c = w.coeffs(pt);
            for (auto& v : c) v = imaginary ? v.imag() : v.real();
            return c;
          }};
}

}  // namespace

TwoFormField omega1_field(double g) { return part_of(omega_field(g), false, "Omega1"); }
TwoFormField omega2_field(double g) { return part_of(omega_field(g), true, "Omega2"); }

std::pair<CVec4, CVec4> kernel(const PhasePoint& pt, double g) {
  (void)g;
  require_polar(pt);
  if (std::abs(pt.p2()) < kDegenerateMomentum) throw DegenerateLocus("Omega kernel printed basis degenerates at p_phi = 0");
  const CoefficientTable a = alpha(pt);
  const CoefficientTable b = beta(pt);
  const Complex z12(a.c12, b.c12);
  const Complex z23(a.c23, b.c23);
  const Complex z24(a.c24, b.c24);
  return {CVec4(z23, 0.0, z12, 0.0), CVec4(z24, 0.0, 0.0, z12)};
}

VectorField kernel_field(int which) {
  return {which == 0 ? "Z1" : "Z2", kChart, [which](const PhasePoint& pt) {
            const auto [z1, z2] = kernel(pt, 1.0);
            return which == 0 ? z1 : z2;
          }};
}

Mat4 table_recursion(const CoefficientTable& t) {
  Mat4 r = Mat4::Zero();
  r(3, 0) = -t.c12;
  r(0, 1) = t.c23;
  r(1, 1) = t.c24;
  r(2, 1) = t.c12;
  r(3, 2) = t.c23;
  r(3, 3) = t.c24;
  return r;
}

Recursions recursions(const PhasePoint& pt, double g) {
  require_polar(pt);
  Recursions out{};
  out.R1 = table_recursion(alpha(pt));
  out.R2 = table_recursion(beta(pt));
  out.spectrum1 = spectrum(out.R1.cast<Complex>());
  out.spectrum2 = spectrum(out.R2.cast<Complex>());
  const CMat4 truth1 = recursion_from_forms(omega1_field(g), pt);
  const CMat4 truth2 = recursion_from_forms(omega2_field(g), pt);
  out.audit_residual = std::max(max_abs(CMat4(truth1 - out.R1.cast<Complex>())),
                                max_abs(CMat4(truth2 - out.R2.cast<Complex>())));
  return out;
}

ScalarField oscillator_hamiltonian(double alpha0) {
  const double w2 = alpha0 * alpha0;
  return {"H_HO", kChart,
          [w2](const PhasePoint& pt) {
            const double r = pt.q1();
            return 0.5 * (pt.p1() * pt.p1() + pt.p2() * pt.p2() / (r * r)) + 0.5 * w2 * r * r;
          },
          [w2](const PhasePoint& pt) {
            const double r = pt.q1();
            const double pphi = pt.p2();
            return Vec4(-pphi * pphi / (r * r * r) + w2 * r, 0.0, pt.p1(), pphi / (r * r));
          }};
}

ComplexObservable oscillator_m_r(double alpha0) {
  const double w2 = alpha0 * alpha0;
  ScalarField re{"M_HO1", kChart, [](const PhasePoint& pt) { return 2.0 * pt.p1() * pt.p2() / pt.q1(); },
                 [](const PhasePoint& pt) {
                   const double r = pt.q1();
                   const double pr = pt.p1();
                   const double pphi = pt.p2();
                   return Vec4(-2.0 * pr * pphi / (r * r), 0.0, 2.0 * pphi / r, 2.0 * pr / r);
                 }};
  ScalarField im{"M_HO2", kChart,
                 [w2](const PhasePoint& pt) {
                   const double r = pt.q1();
                   return pt.p1() * pt.p1() - pt.p2() * pt.p2() / (r * r) + w2 * r * r;
                 },
                 [w2](const PhasePoint& pt) {
                   const double r = pt.q1();
                   const double pphi = pt.p2();
                   return Vec4(2.0 * pphi * pphi / (r * r * r) + 2.0 * w2 * r, 0.0, 2.0 * pt.p1(),
                               -2.0 * pphi / (r * r));
                 }};
  return {re, im};
}

ComplexObservable fradkin(double alpha0) {
  const ComplexObservable nc = conj(n_phi());
  ComplexObservable f = product(oscillator_m_r(alpha0), product(nc, nc));
  f.re.name = "F1";
  f.im.name = "F2";
  return f;
}

OscillatorObservables oscillator_observables(const PhasePoint& pt, double alpha0) {
  require_polar(pt);
  if (!(alpha0 > 0.0)) throw DomainError("oscillator frequency must be positive");
  const Complex m = oscillator_m_r(alpha0).value(pt);
  const Complex nc = std::conj(n_phi().value(pt));
  return {oscillator_hamiltonian(alpha0).value(pt), m, m * nc * nc};
}

}  // namespace kqbh::polar
