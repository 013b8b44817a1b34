#pragma once

#include <array>

namespace levy {

using Mat3 = std::array<double, 9>;  // row-major
using Mat2 = std::array<double, 4>;

inline double at(const Mat3& m, int r, int c) { return m[3 * r + c]; }

Mat3 mat_mul(const Mat3& a, const Mat3& b);
Mat3 transpose(const Mat3& a);
double det(const Mat3& a);

/// Inverse; throws SingularJacobian when |det| is negligible relative to the
/// entry scale.
Mat3 inverse(const Mat3& a);

/// True when a symmetric matrix admits a Cholesky factorization.
bool is_positive_definite(const Mat3& a);

}  // namespace levy
