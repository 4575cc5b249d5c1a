#pragma once

#include <functional>
#include <string>
#include <vector>

#include "kqbh/charts.hpp"
#include "kqbh/types.hpp"

// Exterior and Poisson calculus on a four-dimensional chart. Observables
// carry hand-coded gradients; finite differences appear only where a
// derivative of a vector field or of form coefficients is needed.

namespace kqbh {

/// A real function on a chart together with its exact gradient
/// (d/dq1, d/dq2, d/dp1, d/dp2).
struct ScalarField {
  std::string name;
  ChartId chart;
  std::function<double(const PhasePoint&)> value;
  std::function<Vec4(const PhasePoint&)> gradient;

  double operator()(const PhasePoint& pt) const { return value(pt); }
};

/// A complex observable stored as an explicit (re, im) pair.
struct ComplexObservable {
  ScalarField re;
  ScalarField im;

  ChartId chart() const { return re.chart; }
  Complex value(const PhasePoint& pt) const { return {re.value(pt), im.value(pt)}; }
  CVec4 gradient(const PhasePoint& pt) const;
};

/// Possibly complex vector field; components on d/dq1, d/dq2, d/dp1, d/dp2.
struct VectorField {
  std::string name;
  ChartId chart;
  std::function<CVec4(const PhasePoint&)> value;

  CVec4 operator()(const PhasePoint& pt) const { return value(pt); }
};

/// Possibly complex 2-form given by its six basis coefficients.
struct TwoFormField {
  std::string name;
  ChartId chart;
  std::function<FormCoeffs(const PhasePoint&)> coeffs;

  CMat4 matrix(const PhasePoint& pt) const;
};

CMat4 form_matrix(const FormCoeffs& c);
FormCoeffs form_coeffs(const CMat4& antisymmetric);

// ---- field algebra (exact gradients by the usual rules) ----

ScalarField constant_field(ChartId chart, double c, std::string name = "const");
ScalarField coordinate_field(ChartId chart, int index);
ScalarField product(const ScalarField& f, const ScalarField& g);
ScalarField scaled(const ScalarField& f, double factor);
ComplexObservable real_observable(const ScalarField& f);
ComplexObservable conj(const ComplexObservable& f);
ComplexObservable product(const ComplexObservable& f, const ComplexObservable& g);

/// {f, g} as a scalar field; its gradient is taken by central differences,
/// so it is only suitable as an input to finite-difference-tier checks.
ScalarField bracket_field(const ScalarField& f, const ScalarField& g);

// ---- pointwise operations ----

/// Canonical bracket sum_j (df/dq_j dg/dp_j - df/dp_j dg/dq_j).
double poisson_bracket(const ScalarField& f, const ScalarField& g, const PhasePoint& pt);
Complex poisson_bracket(const ComplexObservable& f, const ComplexObservable& g, const PhasePoint& pt);
double poisson_bracket(const Vec4& df, const Vec4& dg);
Complex poisson_bracket(const CVec4& df, const CVec4& dg);

/// X_f = (df/dp1, df/dp2, -df/dq1, -df/dq2), so that i(X_f) omega0 = df.
VectorField hamiltonian_vf(const ScalarField& f);
VectorField hamiltonian_vf(const ComplexObservable& f);
CVec4 hamiltonian_vector(const CVec4& df);

/// dF ^ dG* (conjugate_second) or dF ^ dG, from exact gradients.
TwoFormField build_wedge_form(const ComplexObservable& f, const ComplexObservable& g, bool conjugate_second);
FormCoeffs wedge_of_differentials(const CVec4& df, const CVec4& dg);

/// The covector v -> W(X, v).
CVec4 interior_product(const VectorField& x, const TwoFormField& w, const PhasePoint& pt);
CVec4 interior_product(const CVec4& x, const CMat4& w);

/// The 2-form omega0 = dq1^dp1 + dq2^dp2 on the given chart.
TwoFormField canonical_form(ChartId chart);

/// dW at pt by central differences of the six coefficients.
ThreeFormCoeffs exterior_derivative(const TwoFormField& w, const PhasePoint& pt);

/// Coefficient of W1 ^ W2 on dq1^dq2^dp1^dp2.
Complex wedge22(const FormCoeffs& w1, const FormCoeffs& w2);
Complex wedge22(const TwoFormField& w1, const TwoFormField& w2, const PhasePoint& pt);

/// [X, Y] = (DY) X - (DX) Y with Jacobians by central differences.
CVec4 lie_bracket(const VectorField& x, const VectorField& y, const PhasePoint& pt);

/// L_X W = i_X dW + d(i_X W), returned as an antisymmetric matrix.
CMat4 lie_derivative_2form(const VectorField& x, const TwoFormField& w, const PhasePoint& pt);

/// R with W(X, Y) = omega0(RX, Y).
CMat4 recursion_from_forms(const FormCoeffs& w);
CMat4 recursion_from_forms(const TwoFormField& w, const PhasePoint& pt);

/// Monic characteristic polynomial t^4 + c1 t^3 + c2 t^2 + c3 t + c4 and
/// the elementary symmetric functions of the eigenvalues.
struct CharPoly {
  std::array<Complex, 5> coeffs;  // descending powers, coeffs[0] == 1
  std::array<Complex, 4> elementary;  // e1..e4

  Complex trace() const { return elementary[0]; }
  Complex det() const { return elementary[3]; }
};

CharPoly char_poly(const CMat4& r);

struct Spectrum {
  CharPoly poly;
  std::array<Complex, 4> eigenvalues;  // sorted by modulus
};

Spectrum spectrum(const CMat4& r);

inline constexpr double kKernelTolerance = 1e-9;

/// Orthonormal null-space basis by Gaussian elimination with full pivoting;
/// pivots below tol * max|A| count as zero.
std::vector<CVec4> kernel_basis(const CMat4& a, double tol = kKernelTolerance);

/// Smooth local kernel fields of w near base: the pivot pattern of the
/// elimination at base is kept fixed and the free components are set to 1
/// and 0, so no normalization enters the derivatives.
std::vector<VectorField> frozen_kernel_fields(const TwoFormField& w, const PhasePoint& base,
                                              double tol = kKernelTolerance);

using TensorField = std::function<CMat4(const PhasePoint&)>;

/// N_R(X, Y) = R^2[X,Y] + [RX,RY] - R[RX,Y] - R[X,RY].
CVec4 nijenhuis_torsion(const TensorField& r, const VectorField& x, const VectorField& y, const PhasePoint& pt);

/// max_k |analytic - central FD| / (1 + |analytic|).
double validate_gradient(const ScalarField& f, const PhasePoint& pt);

// ---- finite-difference helpers shared by the operations above ----

/// Step for coordinate value x: cbrt(machine epsilon) * (1 + |x|).
double fd_step(double x);

/// Central-difference partial derivative along coordinate k.
template <typename F>
auto central_difference(const F& f, const PhasePoint& pt, int k) -> decltype(f(pt)) {
  const double h = fd_step(pt[k]);
  Vec4 plus = pt.coords();
  Vec4 minus = pt.coords();
  plus[k] += h;
  minus[k] -= h;
  const auto fp = f(PhasePoint::make(pt.chart(), plus));
  const auto fm = f(PhasePoint::make(pt.chart(), minus));
  return (fp - fm) / (2.0 * h);
}

/// Column k holds dV/dx_k.
CMat4 fd_jacobian(const VectorField& v, const PhasePoint& pt);

Vec4 fd_gradient(const std::function<double(const PhasePoint&)>& f, const PhasePoint& pt);

}  // namespace kqbh
