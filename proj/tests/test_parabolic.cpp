#include "kqbh/parabolic.hpp"
#include "support.hpp"

using namespace kqbh;
using namespace kqbh::test;
using doctest::Approx;

namespace {

bool close(Complex a, Complex b, double tol = 1e-14) { return std::abs(a - b) < tol; }

parabolic::Profile constant(double c) {
  return [c](double) { return c; };
}

}  // namespace

TEST_CASE("observables at (1, 0, 1, 0)") {
  const parabolic::Observables o = parabolic::observables(par(1, 0, 1, 0), 1);
  CHECK(o.J == 0.0);
  CHECK(close(o.M_a, {0.0, 2.0}));
  CHECK(close(o.M_b, 0.0));
  CHECK(close(o.K34, 0.0));
  CHECK(o.H == Approx(-0.5));
  CHECK(o.K4 == 0.0);
}

TEST_CASE("observables at (1, 1, 1, 0)") {
  const parabolic::Observables o = parabolic::observables(par(1, 1, 1, 0), 1);
  CHECK(o.H == Approx(-0.25));
  CHECK(o.lambda == Approx(-0.25));
  CHECK(o.J == Approx(-1.0));
  CHECK(o.Px == Approx(0.5));
  CHECK(o.Py == Approx(0.5));
  CHECK(o.Rx == Approx(-0.5));
  CHECK(close(o.M_a, {-1.0 / std::sqrt(2.0), std::sqrt(2.0)}));
  CHECK(close(o.M_b, {0.0, 1.0 / std::sqrt(2.0)}));
  CHECK(close(o.K34, {1.0, 0.5}));
  CHECK(o.modA2 == Approx(2.5));
  CHECK(o.modB2 == Approx(0.5));
  CHECK(o.K3_displayed == Approx(0.5));
  CHECK(o.K3_displayed == Approx(o.J * o.Px + 1.0 * 2 * 1 * 1 / 2.0));
}

TEST_CASE("record identities on a grid") {
  for (double g : {1.0, 2.0}) {
    for (const PhasePoint& p : parabolic_grid()) {
      const parabolic::Observables o = parabolic::observables(p, g);
      const double a = p.q1(), b = p.q2();
      const double s = a * a + b * b;
      CHECK(std::abs(o.K4 + 2 * o.J * o.J * o.H) < 1e-12 * (1 + std::abs(o.K4)));
      CHECK(std::abs(o.modA2 - 2 * (o.J * o.J * o.H - g * o.Rx + g * g)) < 1e-12 * (1 + o.modA2));
      CHECK(std::abs(o.modB2 - 2 * (o.J * o.J * o.H + g * o.Rx + g * g)) < 1e-12 * (1 + o.modB2));
      CHECK(std::abs(o.modA2 + o.modB2 - 4 * (o.J * o.J * o.H + g * g)) < 1e-11 * (1 + o.modA2));
      CHECK(std::abs(o.K3_displayed - (o.J * o.Px + g * 2 * a * b / s)) < 1e-12 * (1 + std::abs(o.K3)));
    }
  }
}

TEST_CASE("exact gradients agree with finite differences") {
  for (const PhasePoint& p : parabolic_grid()) {
    for (const ScalarField& f :
         {parabolic::hamiltonian(1), parabolic::lambda(), parabolic::angular_momentum(), parabolic::px(),
          parabolic::py(), parabolic::rx(1), parabolic::m_a(1).re, parabolic::m_a(1).im, parabolic::m_b(1).re,
          parabolic::m_b(1).im, parabolic::k3(1), parabolic::k4(1)}) {
      CHECK_MESSAGE(validate_gradient(f, p) < 1e-7, f.name);
    }
  }
}

TEST_CASE("dynamical field") {
  const Vec4 want(0.5, 0, -0.25, -0.25);
  CHECK(max_abs(Vec4(parabolic::gamma_printed(par(1, 1, 1, 0), 1) - want)) < 1e-15);
  CHECK(max_abs(Vec4(parabolic::gamma(par(1, 1, 1, 0), 1) - want)) < 1e-15);
  CHECK(max_abs(Vec4(parabolic::gamma_printed(par(1, 0, 1, 0), 1) - Vec4(1, 0, -1, 0))) < 1e-15);
  for (const PhasePoint& p : parabolic_grid())
    CHECK(max_abs(Vec4(parabolic::gamma(p, 1) - parabolic::gamma_printed(p, 1))) < 1e-12);
}

TEST_CASE("bracket rotation and first integrals") {
  const Complex i(0, 1);
  const ScalarField h = parabolic::hamiltonian(1);
  const ComplexObservable hc = real_observable(h);
  for (const PhasePoint& p : parabolic_grid()) {
    const double lam = parabolic::lambda()(p);
    for (const ComplexObservable& m : {parabolic::m_a(1), parabolic::m_b(1)}) {
      const Complex v = m.value(p);
      CHECK(std::abs(poisson_bracket(m, hc, p) - i * lam * v) < 1e-10 * (1 + std::abs(v)));
    }
    CHECK(std::abs(poisson_bracket(parabolic::k3(1), h, p)) < 1e-10);
    CHECK(std::abs(poisson_bracket(parabolic::k4(1), h, p)) < 1e-10);
    CHECK(std::abs(poisson_bracket(parabolic::rx(1), h, p)) < 1e-10);
  }
}

TEST_CASE("Z fields match the Hamiltonian fields of M_a, M_b") {
  for (const PhasePoint& p : parabolic_grid()) {
    const parabolic::ZFields z = parabolic::z_fields(p, 1);
    CHECK(z.audit_a < 1e-12);
    CHECK(z.audit_b < 1e-12);
    const CVec4 dh = parabolic::hamiltonian(1).gradient(p).cast<Complex>();
    CHECK(std::abs(z.Z34.cwiseProduct(dh).sum()) < 1e-10);
  }
  const PhasePoint p = par(1, 1, 1, 0);
  const Complex i(0, 1);
  const CVec4 lhs = lie_bracket(parabolic::gamma_field(1), parabolic::z_field(1), p);
  const Complex k = parabolic::k34(1).value(p);
  CHECK(max_abs(CVec4(lhs - i * k * hamiltonian_vf(parabolic::lambda())(p))) < 1e-6 * (1 + std::abs(k)));
}

TEST_CASE("forms and the quasi-Hamiltonian relations") {
  const Complex i(0, 1);
  for (const PhasePoint& p : parabolic_grid()) {
    const double lam = parabolic::lambda()(p);
    const CVec4 lhs = interior_product(parabolic::gamma_field(1), parabolic::omega_field(1), p);
    CHECK(max_abs(CVec4(lhs - i * lam * parabolic::k34(1).gradient(p))) < 1e-10);
    const CVec4 l1 = interior_product(parabolic::gamma_field(1), parabolic::omega1_field(1), p);
    const CVec4 l2 = interior_product(parabolic::gamma_field(1), parabolic::omega2_field(1), p);
    CHECK(max_abs(CVec4(l1 + lam * parabolic::k4(1).gradient(p).cast<Complex>())) < 1e-10);
    CHECK(max_abs(CVec4(l2 - lam * parabolic::k3(1).gradient(p).cast<Complex>())) < 1e-10);

    const parabolic::Forms f = parabolic::forms(p, 1);
    CHECK(std::abs(wedge22(f.Omega1, f.Omega1)) < 1e-12);
    CHECK(std::abs(wedge22(f.Omega2, f.Omega2)) < 1e-12);
    CHECK(std::abs(wedge22(f.Omega1, f.Omega2)) < 1e-12);
  }
}

TEST_CASE("printed tables: every slot matches except beta24") {
  for (const PhasePoint& p : parabolic_grid()) {
    const parabolic::Forms f = parabolic::forms(p, 1);
    for (const auto& a : f.audit) {
      if (a.name == "beta24") continue;
      CHECK_MESSAGE(a.residual < 1e-12, a.name);
    }
  }
  // beta24 with the opposite sign on the a^2 p_a + b^2 p_a part matches
  const PhasePoint p = par(1.4, -0.8, 0.5, 1.6);
  const double a = p.q1(), b = p.q2(), pa = p.p1(), pb = p.p2();
  const double s = a * a + b * b;
  const double corrected = 2.0 / (s * s) * (-2 * a * b * pb + a * a * pa + b * b * pa) * a;
  const parabolic::Forms f = parabolic::forms(p, 1);
  CHECK(std::abs(f.Omega2[4].real() - corrected) < 1e-12);
  CHECK(std::abs(f.Omega2[4].real() - f.Omega2_printed[4].real()) > 1e-3);
}

TEST_CASE("recursion operators") {
  const parabolic::Recursions r = parabolic::recursions(par(1, 1, 1, 0), 1);
  CHECK(std::abs(r.spectrum1.poly.det()) < 1e-9 * std::pow(max_abs(r.R1), 4));
  CHECK(std::abs(r.spectrum2.poly.det()) < 1e-9 * std::pow(max_abs(r.R2), 4));
  for (const PhasePoint& p : parabolic_grid()) {
    const parabolic::Recursions rp = parabolic::recursions(p, 1);
    for (const auto& [r, s] : {std::pair{rp.R1, rp.spectrum1}, std::pair{rp.R2, rp.spectrum2}}) {
      const auto& e = s.poly.elementary;
      const double n4 = std::pow(max_abs(r), 4);
      CHECK(std::abs(e[2]) < 1e-9 * n4);
      CHECK(std::abs(e[3]) < 1e-9 * n4);
      CHECK(std::abs(e[1] - (e[0] / 2.0) * (e[0] / 2.0)) < 1e-8 * std::max(1.0, std::abs(e[1])));
    }
  }
  CHECK_THROWS_AS(parabolic::recursions(par(1, 0, 1, 0), 1), DegenerateLocus);
}

TEST_CASE("orthogonality relations") {
  for (const PhasePoint& p : parabolic_grid()) {
    const CVec4 gam = parabolic::gamma_field(1)(p);
    const CVec4 x3 = hamiltonian_vf(parabolic::k3(1))(p);
    const CVec4 x4 = hamiltonian_vf(parabolic::k4(1))(p);
    const Complex a = gam.transpose() * parabolic::omega1_field(1).matrix(p) * x4;
    const Complex b = gam.transpose() * parabolic::omega2_field(1).matrix(p) * x3;
    CHECK(std::abs(a) < 1e-10);
    CHECK(std::abs(b) < 1e-10);
  }
}

TEST_CASE("Lie derivatives of omega0") {
  const PhasePoint p = par(1, 1, 1, 0);
  const TwoFormField w0 = canonical_form(ChartId::parabolic);
  const CMat4 omega = parabolic::omega_field(1).matrix(p);
  CHECK(max_abs(CMat4(lie_derivative_2form(parabolic::z_field(1), w0, p) + omega)) < 1e-6);
  CHECK(max_abs(CMat4(lie_derivative_2form(parabolic::zprime_field(1), w0, p) - omega)) < 1e-6);
}

TEST_CASE("separable second integral") {
  const PhasePoint p = par(1, 1, 1, 0);
  CHECK(parabolic::separable_second_integral(constant(-0.5), constant(-0.5), p) == Approx(-0.5));
  CHECK(parabolic::separable_second_integral(constant(-0.5), constant(-0.5), p) == Approx(parabolic::rx(1)(p)));
  CHECK(parabolic::separable_second_integral(constant(0), constant(0), p) == Approx(-0.5));

  // conserved under the separable Hamiltonian, FD bracket
  const auto A = [](double a) { return -0.5 + 0.3 * a * a * a * a; };
  const auto B = [](double b) { return -0.5 + 0.1 * b * b; };
  for (const PhasePoint& q : parabolic_grid()) {
    const Vec4 dj = fd_gradient([&](const PhasePoint& x) { return parabolic::separable_second_integral(A, B, x); }, q);
    const Vec4 dh = fd_gradient([&](const PhasePoint& x) { return parabolic::separable_hamiltonian(A, B, x); }, q);
    CHECK(std::abs(poisson_bracket(dj, dh)) < 1e-6);
  }
}

TEST_CASE("kernel fields") {
  const PhasePoint p = par(1, 1, 1, 0);
  const auto fields = parabolic::kernel_fields(p, 1);
  REQUIRE(fields.size() == 2);
  const CMat4 omega = parabolic::omega_field(1).matrix(p);
  for (const auto& w : fields) CHECK(max_abs(CVec4(omega.transpose() * w(p))) < 1e-12 * max_abs(omega));
}
