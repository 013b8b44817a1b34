#include "levy/linalg.hpp"

#include <cmath>

#include "levy/error.hpp"

namespace levy {

Mat3 mat_mul(const Mat3& a, const Mat3& b) {
  Mat3 c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += a[3 * i + k] * b[3 * k + j];
      c[3 * i + j] = s;
    }
  return c;
}

Mat3 transpose(const Mat3& a) {
  Mat3 t{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t[3 * j + i] = a[3 * i + j];
  return t;
}

double det(const Mat3& a) {
  return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
         a[2] * (a[3] * a[7] - a[4] * a[6]);
}

Mat3 inverse(const Mat3& a) {
  const double d = det(a);
  double scale = 0.0;
  for (double v : a) scale = std::fmax(scale, std::fabs(v));
  if (!(std::fabs(d) > 1e-14 * scale * scale * scale))
    fail(ErrorCode::SingularJacobian, "matrix is numerically singular", "inverse");
  Mat3 inv{};
  inv[0] = (a[4] * a[8] - a[5] * a[7]) / d;
  inv[1] = (a[2] * a[7] - a[1] * a[8]) / d;
  inv[2] = (a[1] * a[5] - a[2] * a[4]) / d;
  inv[3] = (a[5] * a[6] - a[3] * a[8]) / d;
  inv[4] = (a[0] * a[8] - a[2] * a[6]) / d;
  inv[5] = (a[2] * a[3] - a[0] * a[5]) / d;
  inv[6] = (a[3] * a[7] - a[4] * a[6]) / d;
  inv[7] = (a[1] * a[6] - a[0] * a[7]) / d;
  inv[8] = (a[0] * a[4] - a[1] * a[3]) / d;
  return inv;
}

bool is_positive_definite(const Mat3& a) {
  double l[9] = {};
  for (int j = 0; j < 3; ++j) {
    double s = a[3 * j + j];
    for (int k = 0; k < j; ++k) s -= l[3 * j + k] * l[3 * j + k];
    if (!(s > 0.0)) return false;
    l[3 * j + j] = std::sqrt(s);
    for (int i = j + 1; i < 3; ++i) {
      double t = a[3 * i + j];
      for (int k = 0; k < j; ++k) t -= l[3 * i + k] * l[3 * j + k];
      l[3 * i + j] = t / l[3 * j + j];
    }
  }
  return true;
}

}  // namespace levy
