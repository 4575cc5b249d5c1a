#include "kqbh/polar.hpp"
#include "support.hpp"

using namespace kqbh;
using namespace kqbh::test;
using doctest::Approx;

namespace {

bool close(Complex a, Complex b, double tol = 1e-14) { return std::abs(a - b) < tol; }

}  // namespace

TEST_CASE("observables on the circular orbit") {
  const polar::Observables o = polar::observables(pol(1, 0, 0, 1), 1);
  CHECK(o.H == Approx(-0.5));
  CHECK(close(o.M_r, 0.0));
  CHECK(o.J3 == 0.0);
  CHECK(std::abs(o.J4) < 1e-15);
  CHECK(std::abs(o.modM2) < 1e-15);
}

TEST_CASE("observables at (1, pi/2, 0.5, 1)") {
  const polar::Observables o = polar::observables(pol(1, kPi / 2, 0.5, 1), 1);
  CHECK(o.H == Approx(-0.375));
  CHECK(o.lambda == Approx(1.0));
  CHECK(close(o.M_r, {0.5, 0.0}));
  CHECK(close(o.N_phi, {0.0, 1.0}));
  CHECK(close(o.J34, {0.0, -0.5}));
  CHECK(std::abs(o.J3) < 1e-15);
  CHECK(o.J4 == Approx(-0.5));
  CHECK(o.modM2 == Approx(0.25));
  // the sign-flipped expansion
  CHECK(polar::j4_displayed(pol(1, kPi / 2, 0.5, 1), 1) == Approx(0.5));
}

TEST_CASE("observables at (1, 0, 1, 1)") {
  const polar::Observables o = polar::observables(pol(1, 0, 1, 1), 1);
  CHECK(o.H == Approx(0.0));
  CHECK(close(o.M_r, {1.0, 0.0}));
  CHECK(close(o.N_phi, {1.0, 0.0}));
  CHECK(o.J3 == Approx(1.0));
  CHECK(o.J4 == 0.0);
  CHECK(o.modM2 == Approx(1.0));
}

TEST_CASE("record identities on a grid") {
  for (const PhasePoint& p : polar_grid()) {
    const polar::Observables o = polar::observables(p, 1);
    CHECK(std::abs(std::abs(o.N_phi) - 1.0) < 1e-12);
    CHECK(std::abs(o.modM2 - (2 * p.p2() * p.p2() * o.H + 1.0)) < 1e-12);
    CHECK(std::abs(o.J4 + polar::j4_displayed(p, 1)) < 1e-12);
  }
}

TEST_CASE("exact gradients agree with finite differences") {
  const double alpha0 = 1.3;
  for (const PhasePoint& p : polar_grid()) {
    for (const ScalarField& f : {polar::hamiltonian(1), polar::lambda(), polar::m_r(1).re, polar::m_r(1).im,
                                 polar::n_phi().re, polar::n_phi().im, polar::j3(1), polar::j4(1),
                                 polar::oscillator_hamiltonian(alpha0), polar::oscillator_m_r(alpha0).re,
                                 polar::oscillator_m_r(alpha0).im, polar::fradkin(alpha0).re, polar::fradkin(alpha0).im}) {
      CHECK_MESSAGE(validate_gradient(f, p) < 1e-7, f.name);
    }
  }
}

TEST_CASE("dynamical field") {
  CHECK(max_abs(Vec4(polar::gamma(pol(1, kPi / 2, 0.5, 1), 1) - Vec4(0.5, 1, 0, 0))) < 1e-15);
  CHECK(max_abs(Vec4(polar::gamma(pol(1, 0, 0, 1), 1) - Vec4(0, 1, 0, 0))) < 1e-15);
}

TEST_CASE("bracket rotation and first integrals") {
  const ScalarField h = polar::hamiltonian(1);
  const Complex i(0, 1);
  for (const PhasePoint& p : polar_grid()) {
    const double lam = polar::lambda()(p);
    const ComplexObservable hc = real_observable(h);
    const Complex m = polar::m_r(1).value(p);
    CHECK(std::abs(poisson_bracket(polar::m_r(1), hc, p) - i * lam * m) < 1e-10 * (1 + std::abs(m)));
    CHECK(std::abs(poisson_bracket(polar::n_phi(), hc, p) - i * lam * polar::n_phi().value(p)) < 1e-10);
    CHECK(std::abs(poisson_bracket(polar::j3(1), h, p)) < 1e-10);
    CHECK(std::abs(poisson_bracket(polar::j4(1), h, p)) < 1e-10);
    CHECK(poisson_bracket(polar::angular_momentum(), h, p) == 0.0);
  }
}

TEST_CASE("Y fields") {
  const PhasePoint p = pol(1, kPi / 2, 0.5, 1);
  const polar::YFields y = polar::y_fields(p, 1);
  CHECK(max_abs(CVec4(y.Y_phi - CVec4(0, 0, 0, 1))) < 1e-15);
  CHECK(max_abs(CVec4(y.Y_r - CVec4(1, Complex(0.5, -2), Complex(0, -1), 0))) < 1e-15);
  CHECK(y.audit_residual < 1e-10);
  for (const PhasePoint& q : polar_grid()) {
    const polar::YFields yq = polar::y_fields(q, 1);
    CHECK(yq.audit_residual < 1e-10);
    CHECK(max_abs(CVec4(yq.Y34 - yq.Y - yq.Yprime)) == 0.0);
    const CVec4 dh = polar::hamiltonian(1).gradient(q).cast<Complex>();
    CHECK(std::abs(yq.Y34.cwiseProduct(dh).sum()) < 1e-10);
  }
}

TEST_CASE("Prop-level Lie bracket identity for Y") {
  const PhasePoint p = pol(1, kPi / 2, 0.5, 1);
  const Complex i(0, 1);
  const CVec4 lhs = lie_bracket(polar::gamma_field(1), polar::y_field(1), p);
  const Complex j34 = polar::j34(1).value(p);
  const CVec4 rhs = i * j34 * hamiltonian_vf(polar::lambda())(p);
  CHECK(max_abs(CVec4(lhs - rhs)) < 1e-6 * (1 + std::abs(j34)));
}

TEST_CASE("coefficient tables") {
  const polar::CoefficientTable a = polar::alpha(pol(1, kPi / 2, 0.5, 1));
  CHECK(std::abs(a.c12) < 1e-15);
  CHECK(a.c23 == Approx(1.0));
  CHECK(a.c24 == Approx(0.5));
  const polar::CoefficientTable b = polar::beta(pol(1, 0, 0.5, 1));
  CHECK(b.c12 == 0.0);
  CHECK(b.c23 == Approx(1.0));
  CHECK(b.c24 == Approx(0.5));
  for (const PhasePoint& p : polar_grid()) {
    const polar::Forms f = polar::forms(p, 1);
    CHECK(f.audit_residual < 1e-10);
    CHECK(std::abs(wedge22(f.Omega, f.Omega)) < 1e-12);
    CHECK(std::abs(wedge22(f.Omega1, f.Omega1)) < 1e-12);
    CHECK(std::abs(wedge22(f.Omega2, f.Omega2)) < 1e-12);
    CHECK(std::abs(wedge22(f.Omega1, f.Omega2)) < 1e-12);
  }
}

TEST_CASE("quasi-Hamiltonian relations") {
  const Complex i(0, 1);
  for (const PhasePoint& p : polar_grid()) {
    const double lam = polar::lambda()(p);
    const CVec4 lhs = interior_product(polar::gamma_field(1), polar::omega_field(1), p);
    const CVec4 dj = polar::j34(1).gradient(p);
    CHECK(max_abs(CVec4(lhs - i * lam * dj)) < 1e-10);
    const CVec4 l1 = interior_product(polar::gamma_field(1), polar::omega1_field(1), p);
    const CVec4 l2 = interior_product(polar::gamma_field(1), polar::omega2_field(1), p);
    CHECK(max_abs(CVec4(l1 + lam * polar::j4(1).gradient(p).cast<Complex>())) < 1e-10);
    CHECK(max_abs(CVec4(l2 - lam * polar::j3(1).gradient(p).cast<Complex>())) < 1e-10);
  }
}

TEST_CASE("kernel of Omega") {
  const PhasePoint p = pol(1, kPi / 2, 0.5, 1);
  const auto [z1, z2] = polar::kernel(p, 1);
  CHECK(max_abs(CVec4(z1 - CVec4(1, 0, Complex(0, -1), 0))) < 1e-15);
  const CMat4 omega = polar::omega_field(1).matrix(p);
  CHECK(max_abs(CVec4(omega.transpose() * z1)) < 1e-12);
  CHECK(max_abs(CVec4(omega.transpose() * z2)) < 1e-12);

  // same span as the numerical null space
  const auto basis = kernel_basis(omega);
  REQUIRE(basis.size() == 2);
  Eigen::Matrix<Complex, 4, 2> q;
  q.col(0) = basis[0];
  q.col(1) = basis[1];
  for (const CVec4& z : {z1, z2}) {
    const CVec4 residual = z - q * (q.adjoint() * z);
    CHECK(residual.norm() < 1e-8 * z.norm());
  }
  CHECK_THROWS_AS(polar::kernel(pol(1, 0.3, 0.5, 0.0), 1), DegenerateLocus);
}

TEST_CASE("recursion operators") {
  const PhasePoint p = pol(1, kPi / 2, 0.5, 1);
  const polar::Recursions r = polar::recursions(p, 1);
  CHECK(r.audit_residual < 1e-10);
  const double expected[4] = {0, 0, 0.5, 0.5};
  for (int k = 0; k < 4; ++k) CHECK(std::abs(r.spectrum1.eigenvalues[k] - expected[k]) < 1e-7);
  CHECK(std::abs(r.spectrum1.poly.det()) < 1e-14);
  const auto& e = r.spectrum1.poly.elementary;
  CHECK(std::abs(e[1] - (e[0] / 2.0) * (e[0] / 2.0)) < 1e-10);
  for (const PhasePoint& q : polar_grid()) {
    const polar::Recursions rq = polar::recursions(q, 1);
    CHECK(rq.audit_residual < 1e-10);
    for (const Spectrum* s : {&rq.spectrum1, &rq.spectrum2}) {
      CHECK(std::abs(s->poly.elementary[2]) < 1e-10);
      CHECK(std::abs(s->poly.elementary[3]) < 1e-10);
    }
  }
}

TEST_CASE("orthogonality relations") {
  for (const PhasePoint& p : polar_grid()) {
    const CVec4 gam = polar::gamma_field(1)(p);
    const CVec4 y3 = hamiltonian_vf(polar::j3(1))(p);
    const CVec4 y4 = hamiltonian_vf(polar::j4(1))(p);
    const Complex a = gam.transpose() * polar::omega1_field(1).matrix(p) * y4;
    const Complex b = gam.transpose() * polar::omega2_field(1).matrix(p) * y3;
    CHECK(std::abs(a) < 1e-10);
    CHECK(std::abs(b) < 1e-10);
  }
}

TEST_CASE("isotropic oscillator") {
  const polar::OscillatorObservables c = polar::oscillator_observables(pol(1, 0, 0, 1), 1);
  CHECK(std::abs(c.M_r) < 1e-15);
  CHECK(std::abs(c.F) < 1e-15);
  const polar::OscillatorObservables o = polar::oscillator_observables(pol(1, 0, 1, 1), 1);
  CHECK(close(o.M_r, {2.0, 1.0}));
  CHECK(o.H == Approx(1.5));
  CHECK_THROWS_AS(polar::oscillator_observables(pol(1, 0, 1, 1), 0.0), DomainError);

  const Complex i(0, 1);
  const double alpha0 = 0.8;
  const ComplexObservable h = real_observable(polar::oscillator_hamiltonian(alpha0));
  for (const PhasePoint& p : polar_grid()) {
    const Complex m = polar::oscillator_m_r(alpha0).value(p);
    const double lam = polar::lambda()(p);
    CHECK(std::abs(poisson_bracket(polar::oscillator_m_r(alpha0), h, p) - 2.0 * i * lam * m) < 1e-10 * (1 + std::abs(m)));
    CHECK(std::abs(poisson_bracket(polar::fradkin(alpha0), h, p)) < 1e-10 * (1 + std::abs(m)));
  }
}

TEST_CASE("chart checks") {
  CHECK_THROWS_AS(polar::observables(par(1, 1, 1, 0), 1), ChartMismatch);
  CHECK_THROWS_AS(polar::forms(cart(1, 1, 1, 0), 1), ChartMismatch);
}
