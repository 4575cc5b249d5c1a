#pragma once

#include <utility>

#include "kqbh/calculus.hpp"

// The Kepler problem in polar coordinates (r, phi, p_r, p_phi) with
// H = (p_r^2 + p_phi^2 / r^2) / 2 - g / r, and the isotropic oscillator
// H = (p_r^2 + p_phi^2 / r^2) / 2 + alpha0^2 r^2 / 2.

namespace kqbh::polar {

ScalarField hamiltonian(double g);
/// lambda = p_phi / r^2, the common rotation rate of M_r and N_phi.
ScalarField lambda();
/// J2 = p_phi.
ScalarField angular_momentum();

/// M_r = p_r p_phi + i (g - p_phi^2 / r).
ComplexObservable m_r(double g);
/// N_phi = cos(phi) + i sin(phi).
ComplexObservable n_phi();
/// J34 = M_r N_phi*, whose real and imaginary parts are the
/// Laplace-Runge-Lenz components.
ComplexObservable j34(double g);
/// Re(J34) = p_r p_phi cos(phi) + (g - p_phi^2 / r) sin(phi).
ScalarField j3(double g);
/// Im(J34) = (g - p_phi^2 / r) cos(phi) - p_r p_phi sin(phi).
ScalarField j4(double g);

/// p_r p_phi sin(phi) + (p_phi^2 / r) cos(phi) - g cos(phi), i.e. -Im(J34).
double j4_displayed(const PhasePoint& pt, double g);

struct Observables {
  double H;
  double lambda;
  Complex M_r;
  Complex N_phi;
  double J2;
  Complex J34;
  double J3;
  double J4;
  double modM2;
};

Observables observables(const PhasePoint& pt, double g);

/// Dynamical field X_H of the Kepler Hamiltonian.
Vec4 gamma(const PhasePoint& pt, double g);
VectorField gamma_field(double g);

// ---- Hamiltonian fields of M_r and N_phi, in closed form ----

/// Y_r = p_phi d/dr + (p_r - 2i p_phi / r) d/dphi - i (p_phi^2 / r^2) d/dp_r.
CVec4 y_r(const PhasePoint& pt);
/// Y_phi = (sin(phi) - i cos(phi)) d/dp_phi.
CVec4 y_phi(const PhasePoint& pt);

struct YFields {
  CVec4 Y_r;
  CVec4 Y_phi;
  CVec4 Y;       // N_phi* Y_r
  CVec4 Yprime;  // M_r Y_phi*
  CVec4 Y34;     // Y + Yprime
  Vec4 Y3;       // X_{J3}
  Vec4 Y4;       // X_{J4}
  double audit_residual;  // max |Y_r - X_{M_r}|, |Y_phi - X_{N_phi}|
};

YFields y_fields(const PhasePoint& pt, double g);
VectorField y_field(double g);
VectorField yprime_field(double g);

// ---- the 2-forms Omega = dM_r ^ dN_phi* = Omega1 + i Omega2 ----

/// Coefficients on (dr^dphi, dphi^dp_r, dphi^dp_phi).
struct CoefficientTable {
  double c12;
  double c23;
  double c24;
};

/// alpha_12 = (p_phi^2 / r^2) cos(phi), alpha_23 = p_phi sin(phi),
/// alpha_24 = p_r sin(phi) + 2 (p_phi / r) cos(phi).
CoefficientTable alpha(const PhasePoint& pt);
/// beta_12 = -(p_phi^2 / r^2) sin(phi), beta_23 = p_phi cos(phi),
/// beta_24 = p_r cos(phi) - 2 (p_phi / r) sin(phi).
CoefficientTable beta(const PhasePoint& pt);

FormCoeffs table_form(const CoefficientTable& t);

struct Forms {
  FormCoeffs Omega;
  FormCoeffs Omega1;
  FormCoeffs Omega2;
  double audit_residual;  // max slot mismatch against dM_r ^ dN_phi*
};

Forms forms(const PhasePoint& pt, double g);

/// Ground truth dM_r ^ dN_phi* from exact gradients.
TwoFormField omega_field(double g);
TwoFormField omega1_field(double g);
TwoFormField omega2_field(double g);

// ---- kernel of Omega ----

/// Z1 = (alpha23 + i beta23) d/dr + (alpha12 + i beta12) d/dp_r,
/// Z2 = (alpha24 + i beta24) d/dr + (alpha12 + i beta12) d/dp_phi.
/// Throws DegenerateLocus when |p_phi| < kDegenerateMomentum.
std::pair<CVec4, CVec4> kernel(const PhasePoint& pt, double g);
VectorField kernel_field(int which);

inline constexpr double kDegenerateMomentum = 1e-9;

// ---- recursion operators ----

/// R built from a coefficient table in the closed form
///   -c12 d/dp_phi (x) dr + [c23 d/dr + c24 d/dphi + c12 d/dp_r] (x) dphi
///   + c23 d/dp_phi (x) dp_r + c24 d/dp_phi (x) dp_phi.
Mat4 table_recursion(const CoefficientTable& t);

struct Recursions {
  Mat4 R1;
  Mat4 R2;
  Spectrum spectrum1;
  Spectrum spectrum2;
  double audit_residual;  // against recursion_from_forms of the ground-truth forms
};

Recursions recursions(const PhasePoint& pt, double g);

// ---- isotropic oscillator ----

ScalarField oscillator_hamiltonian(double alpha0);
/// M_r = 2 p_r p_phi / r + i (p_r^2 - p_phi^2 / r^2 + alpha0^2 r^2).
ComplexObservable oscillator_m_r(double alpha0);
/// F = M_r (N_phi*)^2, a Fradkin-tensor combination.
ComplexObservable fradkin(double alpha0);

struct OscillatorObservables {
  double H;
  Complex M_r;
  Complex F;
};

OscillatorObservables oscillator_observables(const PhasePoint& pt, double alpha0);

}  // namespace kqbh::polar
