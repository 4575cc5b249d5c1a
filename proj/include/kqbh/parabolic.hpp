#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "kqbh/calculus.hpp"

// The Kepler problem in parabolic coordinates (a, b, p_a, p_b),
// x = (a^2 - b^2)/2, y = ab, with H = ((p_a^2 + p_b^2)/2 - g) / (a^2 + b^2).
// Here g follows the parabolic convention (twice the polar coupling).

namespace kqbh::parabolic {

ScalarField hamiltonian(double g);
/// lambda = J / (a^2 + b^2)^2.
ScalarField lambda();
/// J = a p_b - b p_a.
ScalarField angular_momentum();
/// Cartesian momenta (a p_a - b p_b)/s and (a p_b + b p_a)/s, s = a^2 + b^2.
ScalarField px();
ScalarField py();
/// Rx = J Py - g (a^2 - b^2)/s.
ScalarField rx(double g);

/// M_a = (J p_a + i (2 g a - J p_b)) / sqrt(s).
ComplexObservable m_a(double g);
/// M_b = (J p_b + i (2 g b + J p_a)) / sqrt(s).
ComplexObservable m_b(double g);
/// K34 = M_a M_b*.
ComplexObservable k34(double g);
ScalarField k3(double g);
ScalarField k4(double g);

struct Observables {
  double H;
  double lambda;
  double J;
  double Px;
  double Py;
  double Rx;
  Complex M_a;
  Complex M_b;
  Complex K34;
  double K3;        // Re(K34)
  double K4;        // Im(K34) = -2 J^2 H
  double K3_displayed;  // K3 / (2g) = J Px + 2 g ab / s
  double modA2;
  double modB2;
};

Observables observables(const PhasePoint& pt, double g);

/// Closed form (p_a/s, p_b/s, a (p_a^2 + p_b^2 - 2g)/s^2, b (...)/s^2).
Vec4 gamma_printed(const PhasePoint& pt, double g);
/// X_H evaluated from the exact gradient.
Vec4 gamma(const PhasePoint& pt, double g);
VectorField gamma_field(double g);

// ---- Hamiltonian fields of M_a and M_b in closed form ----

CVec4 z_a(const PhasePoint& pt, double g);
CVec4 z_b(const PhasePoint& pt, double g);

struct ZFields {
  CVec4 Z_a;
  CVec4 Z_b;
  CVec4 Z;       // M_b* Z_a
  CVec4 Zprime;  // M_a Z_b*
  CVec4 Z34;
  double audit_a;  // max |Z_a - X_{M_a}|
  double audit_b;
};

ZFields z_fields(const PhasePoint& pt, double g);
VectorField z_field(double g);
VectorField zprime_field(double g);

// ---- Omega_ab = dM_a ^ dM_b* = Omega_ab1 + i Omega_ab2 ----

TwoFormField omega_field(double g);
TwoFormField omega1_field(double g);
TwoFormField omega2_field(double g);

/// Closed-form tables as printed, without their prefactors.
/// alpha on (da^dp_a, da^dp_b, db^dp_a, db^dp_b, dp_a^dp_b), prefactor 2J/s^2;
/// beta on the first four of those, prefactor 2g/s^2.
struct PrintedTables {
  std::array<double, 5> alpha;
  std::array<double, 4> beta;
  double alpha_prefactor;
  double beta_prefactor;
};

PrintedTables printed_tables(const PhasePoint& pt, double g);
inline constexpr std::array<const char*, 5> kAlphaNames{"alpha13", "alpha14", "alpha23", "alpha24", "alpha34"};
inline constexpr std::array<const char*, 4> kBetaNames{"beta13", "beta14", "beta23", "beta24"};
/// FormCoeffs slot of each table entry.
inline constexpr std::array<int, 5> kTableSlots{1, 2, 3, 4, 5};

struct SlotAudit {
  std::string name;
  double residual;
};

struct Forms {
  FormCoeffs Omega;   // ground truth
  FormCoeffs Omega1;
  FormCoeffs Omega2;
  FormCoeffs Omega1_printed;
  FormCoeffs Omega2_printed;
  std::vector<SlotAudit> audit;  // one entry per table slot, plus the empty slots
};

Forms forms(const PhasePoint& pt, double g);

// ---- recursion operators ----

inline constexpr double kDegenerateJ = 0.1;

struct Recursions {
  CMat4 R1;
  CMat4 R2;
  Spectrum spectrum1;
  Spectrum spectrum2;
};

/// Throws DegenerateLocus when |J| < kDegenerateJ.
Recursions recursions(const PhasePoint& pt, double g);

/// Local kernel fields of Omega_ab near base (pivot pattern frozen at base).
std::vector<VectorField> kernel_fields(const PhasePoint& base, double g);

// ---- separable potentials V = (A(a) + B(b)) / s ----

using Profile = std::function<double(double)>;

/// J (a p_b + b p_a)/s + 2 (a^2 B(b) - b^2 A(a))/s.
double separable_second_integral(const Profile& A, const Profile& B, const PhasePoint& pt);
/// (p_a^2 + p_b^2)/2 + A(a) + B(b), divided by s.
double separable_hamiltonian(const Profile& A, const Profile& B, const PhasePoint& pt);

}  // namespace kqbh::parabolic
