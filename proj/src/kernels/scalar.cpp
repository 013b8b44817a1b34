#include <cmath>

#include "levy/kernels.hpp"

namespace levy::kernels {

namespace ref {

double sum(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i];
  return s;
}

double sum_sign(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += (x[i] > 0.0) - (x[i] < 0.0);
  return s;
}

double sum_log_abs(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::log(std::fabs(x[i]));
  return s;
}

double sum_sq_dev(const double* x, std::size_t n, double c) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - c;
    s += d * d;
  }
  return s;
}

void log_abs(const double* x, std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::log(std::fabs(x[i]));
}

void abs_pow(const double* x, std::size_t n, double p, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::pow(std::fabs(x[i]), p);
}

double sum_abs_pow(const double* x, std::size_t n, double p) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::pow(std::fabs(x[i]), p);
  return s;
}

double lag_product_sum(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) s += a[i] * a[i + 1];
  return s;
}

double triple_product_sum(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i + 2 < n; ++i) s += a[i] * a[i + 1] * a[i + 2];
  return s;
}

void pair_diff(const double* x, std::size_t n_out, double* out) {
  for (std::size_t l = 0; l < n_out; ++l) out[l] = x[2 * l + 1] - x[2 * l];
}

void triple_combo(const double* x, std::size_t n_out, double w, double* out) {
  for (std::size_t l = 0; l < n_out; ++l) out[l] = (x[3 * l] + x[3 * l + 2]) - w * x[3 * l + 1];
}

}  // namespace ref

const Table& scalar_table() {
  static const Table t{
      .name = "scalar",
      .sum = &ref::sum,
      .sum_sign = &ref::sum_sign,
      .sum_log_abs = &ref::sum_log_abs,
      .sum_sq_dev = &ref::sum_sq_dev,
      .log_abs = &ref::log_abs,
      .abs_pow = &ref::abs_pow,
      .sum_abs_pow = &ref::sum_abs_pow,
      .lag_product_sum = &ref::lag_product_sum,
      .triple_product_sum = &ref::triple_product_sum,
      .pair_diff = &ref::pair_diff,
      .triple_combo = &ref::triple_combo,
  };
  return t;
}

}  // namespace levy::kernels
