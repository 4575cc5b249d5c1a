#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace kqbh {

using Complex = std::complex<double>;

// Components are ordered (q1, q2, p1, p2) everywhere.
using Vec4 = Eigen::Vector4d;
using CVec4 = Eigen::Vector4cd;
using Mat4 = Eigen::Matrix4d;
using CMat4 = Eigen::Matrix4cd;

/// Coefficients of a 2-form on the basis
/// dq1^dq2, dq1^dp1, dq1^dp2, dq2^dp1, dq2^dp2, dp1^dp2.
using FormCoeffs = std::array<Complex, 6>;

/// Coefficients of a 3-form on the basis
/// dq1^dq2^dp1, dq1^dq2^dp2, dq1^dp1^dp2, dq2^dp1^dp2.
using ThreeFormCoeffs = std::array<Complex, 4>;

/// Index pairs (i < j) matching the FormCoeffs slot order.
inline constexpr std::array<std::array<int, 2>, 6> kFormSlots{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ChartMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a point lies on a locus where a structure drops rank
/// (p_phi = 0 in the polar chart, J = 0 in the parabolic chart).
class DegenerateLocus : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double max_abs(const CVec4& v) { return v.cwiseAbs().maxCoeff(); }
inline double max_abs(const CMat4& m) { return m.cwiseAbs().maxCoeff(); }
inline double max_abs(const Vec4& v) { return v.cwiseAbs().maxCoeff(); }
inline double max_abs(const Mat4& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace kqbh
