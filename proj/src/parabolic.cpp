#include "kqbh/parabolic.hpp"

#include <cmath>
#include <string>

namespace kqbh::parabolic {

namespace {

constexpr ChartId kChart = ChartId::parabolic;
const Complex I{0.0, 1.0};

void require_parabolic(const PhasePoint& pt) {
  if (pt.chart() != kChart) throw ChartMismatch("expected a parabolic point, got " + std::string(to_string(pt.chart())));
}

// value + exact gradient, carried through the chain rule
struct D {
  double v;
  Vec4 d;
};

D operator+(const D& x, const D& y) { return {x.v + y.v, x.d + y.d}; }
D operator-(const D& x, const D& y) { return {x.v - y.v, x.d - y.d}; }
D operator*(const D& x, const D& y) { return {x.v * y.v, x.v * y.d + y.v * x.d}; }
D operator*(double c, const D& x) { return {c * x.v, c * x.d}; }
D operator/(const D& x, const D& y) { return {x.v / y.v, (x.d * y.v - x.v * y.d) / (y.v * y.v)}; }
D operator-(const D& x, double c) { return {x.v - c, x.d}; }
D dsqrt(const D& x) {
  const double r = std::sqrt(x.v);
  return {r, x.d / (2.0 * r)};
}

struct Vars {
  D a, b, pa, pb, s, J;
};

Vars vars(const PhasePoint& pt) {
  require_parabolic(pt);
  Vars v{};
  v.a = {pt.q1(), Vec4(1, 0, 0, 0)};
  v.b = {pt.q2(), Vec4(0, 1, 0, 0)};
  v.pa = {pt.p1(), Vec4(0, 0, 1, 0)};
  v.pb = {pt.p2(), Vec4(0, 0, 0, 1)};
  v.s = v.a * v.a + v.b * v.b;
  v.J = v.a * v.pb - v.b * v.pa;
  return v;
}

template <typename Expr>
ScalarField field(std::string name, Expr expr) {
  return {std::move(name), kChart, [expr](const PhasePoint& pt) { return expr(vars(pt)).v; },
          [expr](const PhasePoint& pt) { return expr(vars(pt)).d; }};
}

D h_expr(const Vars& v, double g) { return (0.5 * (v.pa * v.pa + v.pb * v.pb) - g) / v.s; }
D py_expr(const Vars& v) { return (v.a * v.pb + v.b * v.pa) / v.s; }

}  // namespace

ScalarField hamiltonian(double g) {
  return field("H", [g](const Vars& v) { return h_expr(v, g); });
}

ScalarField lambda() {
  return field("lambda", [](const Vars& v) { return v.J / (v.s * v.s); });
}

ScalarField angular_momentum() {
  return field("J", [](const Vars& v) { return v.J; });
}

ScalarField px() {
  return field("Px", [](const Vars& v) { return (v.a * v.pa - v.b * v.pb) / v.s; });
}

ScalarField py() {
  return field("Py", [](const Vars& v) { return py_expr(v); });
}

ScalarField rx(double g) {
  return field("Rx", [g](const Vars& v) { return v.J * py_expr(v) - g * ((v.a * v.a - v.b * v.b) / v.s); });
}

ComplexObservable m_a(double g) {
  return {field("M_a1", [](const Vars& v) { return v.J * v.pa / dsqrt(v.s); }),
          field("M_a2", [g](const Vars& v) { return (2.0 * g * v.a - v.J * v.pb) / dsqrt(v.s); })};
}

ComplexObservable m_b(double g) {
  return {field("M_b1", [](const Vars& v) { return v.J * v.pb / dsqrt(v.s); }),
          field("M_b2", [g](const Vars& v) { return (2.0 * g * v.b + v.J * v.pa) / dsqrt(v.s); })};
}

ComplexObservable k34(double g) {
  ComplexObservable k = product(m_a(g), conj(m_b(g)));
  k.re.name = "K3";
  k.im.name = "K4";
  return k;
}

ScalarField k3(double g) { return k34(g).re; }
ScalarField k4(double g) { return k34(g).im; }

Observables observables(const PhasePoint& pt, double g) {
  require_parabolic(pt);
  if (!(g > 0.0)) throw DomainError("coupling constant must be positive");
  Observables o{};
  o.H = hamiltonian(g).value(pt);
  o.lambda = lambda().value(pt);
  o.J = angular_momentum().value(pt);
  o.Px = px().value(pt);
  o.Py = py().value(pt);
  o.Rx = rx(g).value(pt);
  o.M_a = m_a(g).value(pt);
  o.M_b = m_b(g).value(pt);
  o.K34 = o.M_a * std::conj(o.M_b);
  o.K3 = o.K34.real();
  o.K4 = o.K34.imag();
  o.K3_displayed = o.K3 / (2.0 * g);
  o.modA2 = std::norm(o.M_a);
  o.modB2 = std::norm(o.M_b);
  return o;
}

Vec4 gamma_printed(const PhasePoint& pt, double g) {
  require_parabolic(pt);
  const double a = pt.q1();
  const double b = pt.q2();
  const double pa = pt.p1();
  const double pb = pt.p2();
  const double s = a * a + b * b;
  const double k = (pa * pa + pb * pb - 2.0 * g) / (s * s);
  return Vec4(pa / s, pb / s, a * k, b * k);
}

Vec4 gamma(const PhasePoint& pt, double g) {
  require_parabolic(pt);
  return gamma_field(g).value(pt).real();
}

VectorField gamma_field(double g) {
  VectorField f = hamiltonian_vf(hamiltonian(g));
  f.name = "Gamma_K";
  return f;
}

CVec4 z_a(const PhasePoint& pt, double g) {
  require_parabolic(pt);
  const double a = pt.q1();
  const double b = pt.q2();
  const double pa = pt.p1();
  const double pb = pt.p2();
  const double s = a * a + b * b;
  const double rt = std::sqrt(s);
  const double c1 = (a * pa + b * pb) / s;
  const double c2 = ((a * pa + b * pb) * pb - 2.0 * g * b) / s;
  const Vec4 re(a * pb - 2.0 * b * pa, a * pa, -c1 * b * pa, c1 * a * pa);
  const Vec4 im(b * pb, b * pa - 2.0 * a * pb, c2 * b, -c2 * a);
  return (re.cast<Complex>() + I * im.cast<Complex>()) / rt;
}

CVec4 z_b(const PhasePoint& pt, double g) {
  require_parabolic(pt);
  const double a = pt.q1();
  const double b = pt.q2();
  const double pa = pt.p1();
  const double pb = pt.p2();
  const double s = a * a + b * b;
  const double rt = std::sqrt(s);
  const double c1 = (a * pa + b * pb) / s;
  const double c4 = ((a * pa + b * pb) * pa - 2.0 * g * a) / s;
  const Vec4 re(-b * pb, 2.0 * a * pb - b * pa, -c1 * b * pb, c1 * a * pb);
  const Vec4 im(a * pb - 2.0 * b * pa, a * pa, -c4 * b, c4 * a);
  return (re.cast<Complex>() + I * im.cast<Complex>()) / rt;
}

ZFields z_fields(const PhasePoint& pt, double g) {
  require_parabolic(pt);
  ZFields z{};
  const Complex ma = m_a(g).value(pt);
  const Complex mb = m_b(g).value(pt);
  z.Z_a = z_a(pt, g);
  z.Z_b = z_b(pt, g);
  z.Z = std::conj(mb) * z.Z_a;
  z.Zprime = ma * z.Z_b.conjugate();
  z.Z34 = z.Z + z.Zprime;
  z.audit_a = max_abs(CVec4(z.Z_a - hamiltonian_vf(m_a(g)).value(pt)));
  z.audit_b = max_abs(CVec4(z.Z_b - hamiltonian_vf(m_b(g)).value(pt)));
  return z;
}

VectorField z_field(double g) {
  const ComplexObservable mb = m_b(g);
  return {"Z", kChart, [g, mb](const PhasePoint& pt) { return CVec4(std::conj(mb.value(pt)) * z_a(pt, g)); }};
}

VectorField zprime_field(double g) {
  const ComplexObservable ma = m_a(g);
  return {"Z'", kChart, [g, ma](const PhasePoint& pt) { return CVec4(ma.value(pt) * z_b(pt, g).conjugate()); }};
}

TwoFormField omega_field(double g) {
  TwoFormField w = build_wedge_form(m_a(g), m_b(g), true);
  w.name = "Omega_ab";
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

TwoFormField omega1_field(double g) { return part_of(omega_field(g), false, "Omega_ab1"); }
TwoFormField omega2_field(double g) { return part_of(omega_field(g), true, "Omega_ab2"); }

PrintedTables printed_tables(const PhasePoint& pt, double g) {
  require_parabolic(pt);
  const double a = pt.q1();
  const double b = pt.q2();
  const double pa = pt.p1();
  const double pb = pt.p2();
  const double s = a * a + b * b;
  const double J = a * pb - b * pa;
  PrintedTables t{};
  t.alpha_prefactor = 2.0 * J / (s * s);
  t.beta_prefactor = 2.0 * g / (s * s);
  t.alpha = {(2.0 * g * b - a * pa * pb - b * pb * pb) * b,
             -(2.0 * g * a - a * pa * pa - b * pa * pb) * b,
             (-2.0 * g * b + a * pa * pb + b * pb * pb) * a,
             (2.0 * g * a - a * pa * pa - b * pa * pb) * a,
             2.0 * J * s};
  t.beta = {(2.0 * a * b * pa - a * a * pb - b * b * pb) * b,
            (2.0 * a * b * pb - a * a * pa - b * b * pa) * b,
            (-2.0 * a * b * pa + a * a * pb + b * b * pb) * a,
            (-2.0 * a * b * pb - a * a * pa - b * b * pa) * a};
  return t;
}

Forms forms(const PhasePoint& pt, double g) {
  require_parabolic(pt);
  Forms f{};
  f.Omega = omega_field(g).coeffs(pt);
  for (std::size_t s = 0; s < f.Omega.size(); ++s) {
    f.Omega1[s] = f.Omega[s].real();
    f.Omega2[s] = f.Omega[s].imag();
  }
  const PrintedTables t = printed_tables(pt, g);
  f.Omega1_printed = {};
  f.Omega2_printed = {};
  for (std::size_t k = 0; k < t.alpha.size(); ++k) f.Omega1_printed[kTableSlots[k]] = t.alpha_prefactor * t.alpha[k];
  for (std::size_t k = 0; k < t.beta.size(); ++k) f.Omega2_printed[kTableSlots[k]] = t.beta_prefactor * t.beta[k];

  for (std::size_t k = 0; k < t.alpha.size(); ++k) {
    const int s = kTableSlots[k];
    f.audit.push_back({kAlphaNames[k], std::abs(f.Omega1[s] - f.Omega1_printed[s])});
  }
  for (std::size_t k = 0; k < t.beta.size(); ++k) {
    const int s = kTableSlots[k];
    f.audit.push_back({kBetaNames[k], std::abs(f.Omega2[s] - f.Omega2_printed[s])});
  }
  // Slots the tables leave empty: da^db for both parts, dp_a^dp_b for the imaginary part.
  f.audit.push_back({"alpha12", std::abs(f.Omega1[0])});
  f.audit.push_back({"beta12", std::abs(f.Omega2[0])});
  f.audit.push_back({"beta34", std::abs(f.Omega2[5])});
  return f;
}

Recursions recursions(const PhasePoint& pt, double g) {
  require_parabolic(pt);
  if (std::abs(pt.q1() * pt.p2() - pt.q2() * pt.p1()) < kDegenerateJ) {
    throw DegenerateLocus("parabolic recursion operators degenerate near J = 0");
  }
  Recursions r{};
  r.R1 = recursion_from_forms(omega1_field(g), pt);
  r.R2 = recursion_from_forms(omega2_field(g), pt);
  r.spectrum1 = spectrum(r.R1);
  r.spectrum2 = spectrum(r.R2);
  return r;
}

std::vector<VectorField> kernel_fields(const PhasePoint& base, double g) {
  require_parabolic(base);
  return frozen_kernel_fields(omega_field(g), base);
}

double separable_second_integral(const Profile& A, const Profile& B, const PhasePoint& pt) {
  require_parabolic(pt);
  const double a = pt.q1();
  const double b = pt.q2();
  const double pa = pt.p1();
  const double pb = pt.p2();
  const double s = a * a + b * b;
  return (a * pb - b * pa) * (a * pb + b * pa) / s + 2.0 * (a * a * B(b) - b * b * A(a)) / s;
}

double separable_hamiltonian(const Profile& A, const Profile& B, const PhasePoint& pt) {
  require_parabolic(pt);
  const double a = pt.q1();
  const double b = pt.q2();
  const double s = a * a + b * b;
  return (0.5 * (pt.p1() * pt.p1() + pt.p2() * pt.p2()) + A(a) + B(b)) / s;
}

}  // namespace kqbh::parabolic
