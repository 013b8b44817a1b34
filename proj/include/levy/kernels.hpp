#pragma once

#include <cstddef>
#include <string_view>

// Hot loops over increment arrays. Each kernel has a scalar reference
// implementation and an AVX2 variant; the variant is picked once at startup
// from CPU features and can be pinned to scalar with LEVY_ESTIM_SIMD=scalar.
namespace levy::kernels {

struct Table {
  std::string_view name;
  double (*sum)(const double* x, std::size_t n);
  double (*sum_sign)(const double* x, std::size_t n);
  double (*sum_log_abs)(const double* x, std::size_t n);
  double (*sum_sq_dev)(const double* x, std::size_t n, double center);
  // out[j] = log|x[j]|.
  void (*log_abs)(const double* x, std::size_t n, double* out);
  // out[j] = |x[j]|^p; zero maps to zero for p > 0.
  void (*abs_pow)(const double* x, std::size_t n, double p, double* out);
  double (*sum_abs_pow)(const double* x, std::size_t n, double p);
  // Σ_{j} a[j]·a[j+1] for j < n−1.
  double (*lag_product_sum)(const double* a, std::size_t n);
  // Σ_{j} a[j]·a[j+1]·a[j+2] for j < n−2.
  double (*triple_product_sum)(const double* a, std::size_t n);
  // out[l] = x[2l+1] − x[2l].
  void (*pair_diff)(const double* x, std::size_t n_out, double* out);
  // out[l] = x[3l] + x[3l+2] − w·x[3l+1].
  void (*triple_combo)(const double* x, std::size_t n_out, double w, double* out);
};

const Table& scalar_table();
// nullptr when AVX2/FMA are not available on this CPU or not compiled in.
const Table* avx2_table();
const Table& active();

inline double sum(const double* x, std::size_t n) { return active().sum(x, n); }
inline double sum_sign(const double* x, std::size_t n) { return active().sum_sign(x, n); }
inline double sum_log_abs(const double* x, std::size_t n) { return active().sum_log_abs(x, n); }
inline double sum_sq_dev(const double* x, std::size_t n, double c) { return active().sum_sq_dev(x, n, c); }
inline void log_abs(const double* x, std::size_t n, double* out) { active().log_abs(x, n, out); }
inline void abs_pow(const double* x, std::size_t n, double p, double* out) { active().abs_pow(x, n, p, out); }
inline double sum_abs_pow(const double* x, std::size_t n, double p) { return active().sum_abs_pow(x, n, p); }
inline double lag_product_sum(const double* a, std::size_t n) { return active().lag_product_sum(a, n); }
inline double triple_product_sum(const double* a, std::size_t n) { return active().triple_product_sum(a, n); }
inline void pair_diff(const double* x, std::size_t n_out, double* out) { active().pair_diff(x, n_out, out); }
inline void triple_combo(const double* x, std::size_t n_out, double w, double* out) {
  active().triple_combo(x, n_out, w, out);
}

}  // namespace levy::kernels
