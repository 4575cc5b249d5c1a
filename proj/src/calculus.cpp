#include "kqbh/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace kqbh {

namespace {

void require_same_chart(ChartId a, ChartId b, const char* what) {
  if (a != b) {
    throw ChartMismatch(std::string(what) + ": " + std::string(to_string(a)) + " vs " + std::string(to_string(b)));
  }
}

void require_chart(const PhasePoint& pt, ChartId chart, const char* what) { require_same_chart(pt.chart(), chart, what); }

}  // namespace

CVec4 ComplexObservable::gradient(const PhasePoint& pt) const {
  const Vec4 gr = re.gradient(pt);
  const Vec4 gi = im.gradient(pt);
  CVec4 out;
  for (int k = 0; k < 4; ++k) out[k] = Complex(gr[k], gi[k]);
  return out;
}

CMat4 TwoFormField::matrix(const PhasePoint& pt) const {
  require_chart(pt, chart, "two-form evaluation");
  return form_matrix(coeffs(pt));
}

CMat4 form_matrix(const FormCoeffs& c) {
  CMat4 m = CMat4::Zero();
  for (std::size_t s = 0; s < kFormSlots.size(); ++s) {
    const auto [i, j] = kFormSlots[s];
    m(i, j) = c[s];
    m(j, i) = -c[s];
  }
  return m;
}

FormCoeffs form_coeffs(const CMat4& antisymmetric) {
  FormCoeffs c{};
  for (std::size_t s = 0; s < kFormSlots.size(); ++s) {
    const auto [i, j] = kFormSlots[s];
    c[s] = antisymmetric(i, j);
  }
  return c;
}

// ---- field algebra ----

ScalarField constant_field(ChartId chart, double c, std::string name) {
  return {std::move(name), chart, [c](const PhasePoint&) { return c; }, [](const PhasePoint&) { return Vec4::Zero().eval(); }};
}

ScalarField coordinate_field(ChartId chart, int index) {
  static const char* names[] = {"q1", "q2", "p1", "p2"};
  return {names[index], chart, [index](const PhasePoint& pt) { return pt[index]; },
          [index](const PhasePoint&) {
            Vec4 g = Vec4::Zero();
            g[index] = 1.0;
            return g;
          }};
}

ScalarField product(const ScalarField& f, const ScalarField& g) {
  require_same_chart(f.chart, g.chart, "product");
  return {f.name + "*" + g.name, f.chart, [f, g](const PhasePoint& pt) { return f.value(pt) * g.value(pt); },
          [f, g](const PhasePoint& pt) { return (f.value(pt) * g.gradient(pt) + g.value(pt) * f.gradient(pt)).eval(); }};
}

ScalarField scaled(const ScalarField& f, double factor) {
  return {f.name, f.chart, [f, factor](const PhasePoint& pt) { return factor * f.value(pt); },
          [f, factor](const PhasePoint& pt) { return (factor * f.gradient(pt)).eval(); }};
}

ComplexObservable real_observable(const ScalarField& f) {
  return {f, constant_field(f.chart, 0.0, "0")};
}

ComplexObservable conj(const ComplexObservable& f) {
  ScalarField im = scaled(f.im, -1.0);
  im.name = "-" + f.im.name;
  return {f.re, im};
}

ComplexObservable product(const ComplexObservable& f, const ComplexObservable& g) {
  require_same_chart(f.chart(), g.chart(), "product");
  // (a + ib)(c + id) = (ac - bd) + i(ad + bc)
  ScalarField re{"Re(" + f.re.name + "*" + g.re.name + ")", f.chart(),
                 [f, g](const PhasePoint& pt) { return (f.value(pt) * g.value(pt)).real(); },
                 [f, g](const PhasePoint& pt) {
                   const CVec4 d = f.value(pt) * g.gradient(pt) + g.value(pt) * f.gradient(pt);
                   return d.real().eval();
                 }};
  ScalarField im{"Im(" + f.re.name + "*" + g.re.name + ")", f.chart(),
                 [f, g](const PhasePoint& pt) { return (f.value(pt) * g.value(pt)).imag(); },
                 [f, g](const PhasePoint& pt) {
                   const CVec4 d = f.value(pt) * g.gradient(pt) + g.value(pt) * f.gradient(pt);
                   return d.imag().eval();
                 }};
  return {re, im};
}

ScalarField bracket_field(const ScalarField& f, const ScalarField& g) {
  require_same_chart(f.chart, g.chart, "bracket_field");
  auto value = [f, g](const PhasePoint& pt) { return poisson_bracket(f, g, pt); };
  return {"{" + f.name + "," + g.name + "}", f.chart, value,
          [value](const PhasePoint& pt) { return fd_gradient(value, pt); }};
}

// ---- brackets and Hamiltonian fields ----

double poisson_bracket(const Vec4& df, const Vec4& dg) {
  return df[0] * dg[2] - df[2] * dg[0] + df[1] * dg[3] - df[3] * dg[1];
}

Complex poisson_bracket(const CVec4& df, const CVec4& dg) {
  return df[0] * dg[2] - df[2] * dg[0] + df[1] * dg[3] - df[3] * dg[1];
}

double poisson_bracket(const ScalarField& f, const ScalarField& g, const PhasePoint& pt) {
  require_same_chart(f.chart, g.chart, "poisson_bracket");
  require_chart(pt, f.chart, "poisson_bracket");
  return poisson_bracket(f.gradient(pt), g.gradient(pt));
}

Complex poisson_bracket(const ComplexObservable& f, const ComplexObservable& g, const PhasePoint& pt) {
  require_same_chart(f.chart(), g.chart(), "poisson_bracket");
  require_chart(pt, f.chart(), "poisson_bracket");
  return poisson_bracket(f.gradient(pt), g.gradient(pt));
}

CVec4 hamiltonian_vector(const CVec4& df) { return CVec4(df[2], df[3], -df[0], -df[1]); }

VectorField hamiltonian_vf(const ScalarField& f) {
  return {"X_" + f.name, f.chart, [f](const PhasePoint& pt) {
            return hamiltonian_vector(f.gradient(pt).cast<Complex>());
          }};
}

VectorField hamiltonian_vf(const ComplexObservable& f) {
  return {"X_" + f.re.name, f.chart(), [f](const PhasePoint& pt) { return hamiltonian_vector(f.gradient(pt)); }};
}

// ---- forms ----

FormCoeffs wedge_of_differentials(const CVec4& df, const CVec4& dg) {
  FormCoeffs c{};
  for (std::size_t s = 0; s < kFormSlots.size(); ++s) {
    const auto [i, j] = kFormSlots[s];
    c[s] = df[i] * dg[j] - df[j] * dg[i];
  }
  return c;
}

TwoFormField build_wedge_form(const ComplexObservable& f, const ComplexObservable& g, bool conjugate_second) {
  require_same_chart(f.chart(), g.chart(), "build_wedge_form");
  std::string name = "d" + f.re.name + "^d" + g.re.name + (conjugate_second ? "*" : "");
  return {std::move(name), f.chart(), [f, g, conjugate_second](const PhasePoint& pt) {
            CVec4 dg = g.gradient(pt);
            if (conjugate_second) dg = dg.conjugate();
            return wedge_of_differentials(f.gradient(pt), dg);
          }};
}

CVec4 interior_product(const CVec4& x, const CMat4& w) { return w.transpose() * x; }

CVec4 interior_product(const VectorField& x, const TwoFormField& w, const PhasePoint& pt) {
  require_same_chart(x.chart, w.chart, "interior_product");
  require_chart(pt, x.chart, "interior_product");
  return interior_product(x(pt), w.matrix(pt));
}

TwoFormField canonical_form(ChartId chart) {
  return {"omega0", chart, [](const PhasePoint&) {
            FormCoeffs c{};
            c[1] = 1.0;  // dq1^dp1
            c[4] = 1.0;  // dq2^dp2
            return c;
          }};
}

namespace {

// D[k] = dW/dx_k as matrices.
std::array<CMat4, 4> form_derivatives(const TwoFormField& w, const PhasePoint& pt) {
  auto m = [&w](const PhasePoint& p) { return w.matrix(p); };
  std::array<CMat4, 4> d;
  for (int k = 0; k < 4; ++k) d[k] = central_difference(m, pt, k);
  return d;
}

// Fully antisymmetric components of dW.
Complex three_form_component(const std::array<CMat4, 4>& d, int i, int j, int k) {
  return d[i](j, k) + d[j](k, i) + d[k](i, j);
}

}  // namespace

ThreeFormCoeffs exterior_derivative(const TwoFormField& w, const PhasePoint& pt) {
  require_chart(pt, w.chart, "exterior_derivative");
  const auto d = form_derivatives(w, pt);
  return {three_form_component(d, 0, 1, 2), three_form_component(d, 0, 1, 3), three_form_component(d, 0, 2, 3),
          three_form_component(d, 1, 2, 3)};
}

Complex wedge22(const FormCoeffs& a, const FormCoeffs& b) {
  // slots: 0:01 1:02 2:03 3:12 4:13 5:23
  return a[0] * b[5] + a[5] * b[0] - a[1] * b[4] - a[4] * b[1] + a[2] * b[3] + a[3] * b[2];
}

Complex wedge22(const TwoFormField& w1, const TwoFormField& w2, const PhasePoint& pt) {
  require_same_chart(w1.chart, w2.chart, "wedge22");
  require_chart(pt, w1.chart, "wedge22");
  return wedge22(w1.coeffs(pt), w2.coeffs(pt));
}

// ---- Lie operations ----

double fd_step(double x) {
  static const double base = std::cbrt(std::numeric_limits<double>::epsilon());
  return base * (1.0 + std::abs(x));
}

CMat4 fd_jacobian(const VectorField& v, const PhasePoint& pt) {
  CMat4 jac;
  for (int k = 0; k < 4; ++k) jac.col(k) = central_difference(v.value, pt, k);
  return jac;
}

Vec4 fd_gradient(const std::function<double(const PhasePoint&)>& f, const PhasePoint& pt) {
  Vec4 g;
  for (int k = 0; k < 4; ++k) g[k] = central_difference(f, pt, k);
  return g;
}

CVec4 lie_bracket(const VectorField& x, const VectorField& y, const PhasePoint& pt) {
  require_same_chart(x.chart, y.chart, "lie_bracket");
  require_chart(pt, x.chart, "lie_bracket");
  return fd_jacobian(y, pt) * x(pt) - fd_jacobian(x, pt) * y(pt);
}

CMat4 lie_derivative_2form(const VectorField& x, const TwoFormField& w, const PhasePoint& pt) {
  require_same_chart(x.chart, w.chart, "lie_derivative_2form");
  require_chart(pt, x.chart, "lie_derivative_2form");
  const CVec4 xv = x(pt);

  const auto d = form_derivatives(w, pt);
  CMat4 contracted = CMat4::Zero();
  for (int j = 0; j < 4; ++j) {
    for (int k = 0; k < 4; ++k) {
      Complex acc = 0.0;
      for (int i = 0; i < 4; ++i) acc += xv[i] * three_form_component(d, i, j, k);
      contracted(j, k) = acc;
    }
  }

  auto theta = [&x, &w](const PhasePoint& p) { return interior_product(x(p), w.matrix(p)); };
  std::array<CVec4, 4> dtheta;
  for (int k = 0; k < 4; ++k) dtheta[k] = central_difference(theta, pt, k);
  CMat4 exact_part;
  for (int j = 0; j < 4; ++j) {
    for (int k = 0; k < 4; ++k) exact_part(j, k) = dtheta[j][k] - dtheta[k][j];
  }
  return contracted + exact_part;
}

// ---- recursion operators and spectra ----

CMat4 recursion_from_forms(const FormCoeffs& w) {
  // W = R^T A0 with A0 the canonical matrix, and A0^{-1} = -A0, so R = -A0 W.
  return -canonical_matrix().cast<Complex>() * form_matrix(w);
}

CMat4 recursion_from_forms(const TwoFormField& w, const PhasePoint& pt) {
  require_chart(pt, w.chart, "recursion_from_forms");
  return recursion_from_forms(w.coeffs(pt));
}

CharPoly char_poly(const CMat4& a) {
  // Faddeev-LeVerrier: M_k = A M_{k-1} + c_{k-1} I, c_k = -tr(A M_k) / k.
  CharPoly out{};
  out.coeffs[0] = 1.0;
  CMat4 m = CMat4::Zero();
  for (int k = 1; k <= 4; ++k) {
    m = a * m + out.coeffs[k - 1] * CMat4::Identity();
    out.coeffs[k] = -(a * m).trace() / static_cast<double>(k);
  }
  for (int k = 1; k <= 4; ++k) out.elementary[k - 1] = (k % 2 == 0 ? 1.0 : -1.0) * out.coeffs[k];
  return out;
}

Spectrum spectrum(const CMat4& r) {
  Spectrum s{char_poly(r), {}};
  Eigen::ComplexEigenSolver<CMat4> solver(r, false);
  for (int k = 0; k < 4; ++k) s.eigenvalues[k] = solver.eigenvalues()[k];
  std::sort(s.eigenvalues.begin(), s.eigenvalues.end(), [](const Complex& a, const Complex& b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return s;
}

std::vector<CVec4> kernel_basis(const CMat4& a, double tol) {
  const double scale = max_abs(a);
  CMat4 m = a;
  std::array<int, 4> cols{0, 1, 2, 3};
  int rank = 0;
  for (; rank < 4; ++rank) {
    int pi = rank;
    int pj = rank;
    double best = -1.0;
    for (int i = rank; i < 4; ++i) {
      for (int j = rank; j < 4; ++j) {
        if (std::abs(m(i, j)) > best) {
          best = std::abs(m(i, j));
          pi = i;
          pj = j;
        }
      }
    }
    if (scale == 0.0 || best <= tol * scale) break;
    m.row(rank).swap(m.row(pi));
    m.col(rank).swap(m.col(pj));
    std::swap(cols[rank], cols[pj]);
    const Complex pivot = m(rank, rank);
    m.row(rank) /= pivot;
    for (int i = 0; i < 4; ++i) {
      if (i == rank) continue;
      const Complex factor = m(i, rank);
      m.row(i) -= factor * m.row(rank);
    }
  }

  std::vector<CVec4> basis;
  for (int free = rank; free < 4; ++free) {
    CVec4 v = CVec4::Zero();
    v[cols[free]] = 1.0;
    for (int i = 0; i < rank; ++i) v[cols[i]] = -m(i, free);
    basis.push_back(v);
  }
  // Modified Gram-Schmidt, two passes.
  for (std::size_t k = 0; k < basis.size(); ++k) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < k; ++j) basis[k] -= basis[j].dot(basis[k]) * basis[j];
    }
    basis[k].normalize();
  }
  return basis;
}

std::vector<VectorField> frozen_kernel_fields(const TwoFormField& w, const PhasePoint& base, double tol) {
  const CMat4 a0 = w.matrix(base);
  const double scale = max_abs(a0);
  CMat4 m = a0;
  std::array<int, 4> rows{0, 1, 2, 3};
  std::array<int, 4> cols{0, 1, 2, 3};
  int rank = 0;
  for (; rank < 4; ++rank) {
    int pi = rank;
    int pj = rank;
    double best = -1.0;
    for (int i = rank; i < 4; ++i) {
      for (int j = rank; j < 4; ++j) {
        if (std::abs(m(i, j)) > best) {
          best = std::abs(m(i, j));
          pi = i;
          pj = j;
        }
      }
    }
    if (scale == 0.0 || best <= tol * scale) break;
    m.row(rank).swap(m.row(pi));
    m.col(rank).swap(m.col(pj));
    std::swap(rows[rank], rows[pi]);
    std::swap(cols[rank], cols[pj]);
    const Complex pivot = m(rank, rank);
    for (int i = rank + 1; i < 4; ++i) {
      const Complex factor = m(i, rank) / pivot;
      m.row(i) -= factor * m.row(rank);
    }
  }

  std::vector<VectorField> out;
  for (int free = rank; free < 4; ++free) {
    const std::string name = w.name + ".ker" + std::to_string(free - rank);
    out.push_back({name, w.chart, [w, rows, cols, rank, free](const PhasePoint& pt) {
                     const CMat4 a = w.matrix(pt);
                     Eigen::MatrixXcd sub(rank, rank);
                     Eigen::VectorXcd rhs(rank);
                     for (int i = 0; i < rank; ++i) {
                       for (int j = 0; j < rank; ++j) sub(i, j) = a(rows[i], cols[j]);
                       rhs[i] = -a(rows[i], cols[free]);
                     }
                     CVec4 v = CVec4::Zero();
                     v[cols[free]] = 1.0;
                     if (rank > 0) {
                       const Eigen::VectorXcd x = sub.fullPivLu().solve(rhs);
                       for (int j = 0; j < rank; ++j) v[cols[j]] = x[j];
                     }
                     return v;
                   }});
  }
  return out;
}

CVec4 nijenhuis_torsion(const TensorField& r, const VectorField& x, const VectorField& y, const PhasePoint& pt) {
  require_same_chart(x.chart, y.chart, "nijenhuis_torsion");
  require_chart(pt, x.chart, "nijenhuis_torsion");
  const VectorField rx{"R" + x.name, x.chart, [r, x](const PhasePoint& p) { return (r(p) * x(p)).eval(); }};
  const VectorField ry{"R" + y.name, y.chart, [r, y](const PhasePoint& p) { return (r(p) * y(p)).eval(); }};
  const CMat4 rp = r(pt);
  return rp * rp * lie_bracket(x, y, pt) + lie_bracket(rx, ry, pt) - rp * lie_bracket(rx, y, pt) -
         rp * lie_bracket(x, ry, pt);
}

double validate_gradient(const ScalarField& f, const PhasePoint& pt) {
  require_chart(pt, f.chart, "validate_gradient");
  const Vec4 analytic = f.gradient(pt);
  const Vec4 numeric = fd_gradient(f.value, pt);
  double worst = 0.0;
  for (int k = 0; k < 4; ++k) worst = std::max(worst, std::abs(analytic[k] - numeric[k]) / (1.0 + std::abs(analytic[k])));
  return worst;
}

}  // namespace kqbh
