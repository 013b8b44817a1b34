#include <immintrin.h>

#include <cmath>
#include <cstdint>

#include "levy/kernels.hpp"

namespace levy::kernels {

namespace simd {

// Cephes-style log/exp on four lanes. Callers route lanes that are zero,
// denormal, non-finite or out of exp range through the scalar libm path.

inline __m256d polevl(__m256d x, const double* c, int deg) {
  __m256d acc = _mm256_set1_pd(c[0]);
  for (int i = 1; i <= deg; ++i) acc = _mm256_fmadd_pd(acc, x, _mm256_set1_pd(c[i]));
  return acc;
}

inline __m256d p1evl(__m256d x, const double* c, int deg) {
  __m256d acc = _mm256_add_pd(x, _mm256_set1_pd(c[0]));
  for (int i = 1; i < deg; ++i) acc = _mm256_fmadd_pd(acc, x, _mm256_set1_pd(c[i]));
  return acc;
}

constexpr double kLogP[] = {1.01875663804580931796E-4, 4.97494994976747001425E-1, 4.70579119878881725854E0,
                            1.44989225341610930846E1,  1.79368678507819816313E1,  7.70838733755885391666E0};
constexpr double kLogQ[] = {1.12873587189167450590E1, 4.52279145837532221105E1, 8.29875266912776603211E1,
                            7.11544750618563894466E1, 2.31251620126765340583E1};
constexpr double kExpP[] = {1.26177193074810590878E-4, 3.02994407707441961300E-2, 9.99999999999999999910E-1};
constexpr double kExpQ[] = {3.00198505138664455042E-6, 2.52448340349684104192E-3, 2.27265548208155028766E-1,
                            2.0};

// Requires normal, finite, positive lanes.
inline __m256d log_pd(__m256d x) {
  const __m256i bits = _mm256_castpd_si256(x);
  const __m256i magic = _mm256_set1_epi64x(0x4330000000000000LL);
  const __m256i efield = _mm256_srli_epi64(bits, 52);
  __m256d e = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(efield, magic)),
                            _mm256_set1_pd(4503599627370496.0 + 1022.0));
  const __m256i mbits = _mm256_or_si256(_mm256_and_si256(bits, _mm256_set1_epi64x(0x000fffffffffffffLL)),
                                        _mm256_set1_epi64x(0x3fe0000000000000LL));
  __m256d m = _mm256_castsi256_pd(mbits);  // [0.5, 1)
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d small = _mm256_cmp_pd(m, _mm256_set1_pd(0.70710678118654752440), _CMP_LT_OQ);
  e = _mm256_sub_pd(e, _mm256_and_pd(small, one));
  m = _mm256_sub_pd(_mm256_add_pd(m, _mm256_and_pd(small, m)), one);

  const __m256d z = _mm256_mul_pd(m, m);
  __m256d y = _mm256_mul_pd(m, _mm256_div_pd(_mm256_mul_pd(z, polevl(m, kLogP, 5)), p1evl(m, kLogQ, 5)));
  y = _mm256_fnmadd_pd(e, _mm256_set1_pd(2.121944400546905827679e-4), y);
  y = _mm256_fnmadd_pd(_mm256_set1_pd(0.5), z, y);
  __m256d r = _mm256_add_pd(m, y);
  return _mm256_fmadd_pd(e, _mm256_set1_pd(0.693359375), r);
}

// Requires |x| < 708.
inline __m256d exp_pd(__m256d x) {
  const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(1.4426950408889634073599)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  x = _mm256_fnmadd_pd(n, _mm256_set1_pd(6.93145751953125E-1), x);
  x = _mm256_fnmadd_pd(n, _mm256_set1_pd(1.42860682030941723212E-6), x);
  const __m256d xx = _mm256_mul_pd(x, x);
  const __m256d px = _mm256_mul_pd(x, polevl(xx, kExpP, 2));
  __m256d r = _mm256_div_pd(px, _mm256_sub_pd(polevl(xx, kExpQ, 3), px));
  r = _mm256_fmadd_pd(_mm256_set1_pd(2.0), r, _mm256_set1_pd(1.0));
  const __m256d biased = _mm256_add_pd(n, _mm256_set1_pd(4503599627370496.0 + 1023.0));
  const __m256i pow2 = _mm256_slli_epi64(_mm256_castpd_si256(biased), 52);
  return _mm256_mul_pd(r, _mm256_castsi256_pd(pow2));
}

inline __m256d abs_pd(__m256d x) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x); }

// True when every lane is a positive normal finite number.
inline bool all_normal(__m256d a) {
  const __m256d lo = _mm256_cmp_pd(a, _mm256_set1_pd(2.2250738585072014e-308), _CMP_GE_OQ);
  const __m256d hi = _mm256_cmp_pd(a, _mm256_set1_pd(1.7976931348623157e308), _CMP_LE_OQ);
  return _mm256_movemask_pd(_mm256_and_pd(lo, hi)) == 0xF;
}

inline bool all_in_exp_range(__m256d t) {
  const __m256d lim = _mm256_set1_pd(700.0);
  return _mm256_movemask_pd(_mm256_cmp_pd(abs_pd(t), lim, _CMP_LT_OQ)) == 0xF;
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// |x|^p for one block of four lanes, falling back to libm lane-wise.
inline __m256d abs_pow4(const double* x, __m256d vp, double p) {
  const __m256d a = abs_pd(_mm256_loadu_pd(x));
  if (all_normal(a)) {
    const __m256d t = _mm256_mul_pd(vp, log_pd(a));
    if (all_in_exp_range(t)) return exp_pd(t);
  }
  alignas(32) double tmp[4];
  for (int k = 0; k < 4; ++k) tmp[k] = std::pow(std::fabs(x[k]), p);
  return _mm256_load_pd(tmp);
}

double sum(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i];
  return s;
}

double sum_sign(const double* x, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d acc = zero;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    const __m256d pos = _mm256_and_pd(_mm256_cmp_pd(v, zero, _CMP_GT_OQ), one);
    const __m256d neg = _mm256_and_pd(_mm256_cmp_pd(v, zero, _CMP_LT_OQ), one);
    acc = _mm256_add_pd(acc, _mm256_sub_pd(pos, neg));
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += (x[i] > 0.0) - (x[i] < 0.0);
  return s;
}

double sum_log_abs(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  double tail = 0.0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = abs_pd(_mm256_loadu_pd(x + i));
    if (all_normal(a)) {
      acc = _mm256_add_pd(acc, log_pd(a));
    } else {
      for (int k = 0; k < 4; ++k) tail += std::log(std::fabs(x[i + k]));
    }
  }
  double s = hsum(acc) + tail;
  for (; i < n; ++i) s += std::log(std::fabs(x[i]));
  return s;
}

double sum_sq_dev(const double* x, std::size_t n, double c) {
  const __m256d vc = _mm256_set1_pd(c);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), vc);
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double d = x[i] - c;
    s += d * d;
  }
  return s;
}

void log_abs(const double* x, std::size_t n, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = abs_pd(_mm256_loadu_pd(x + i));
    if (all_normal(a)) {
      _mm256_storeu_pd(out + i, log_pd(a));
    } else {
      for (int k = 0; k < 4; ++k) out[i + k] = std::log(std::fabs(x[i + k]));
    }
  }
  for (; i < n; ++i) out[i] = std::log(std::fabs(x[i]));
}

void abs_pow(const double* x, std::size_t n, double p, double* out) {
  const __m256d vp = _mm256_set1_pd(p);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, abs_pow4(x + i, vp, p));
  for (; i < n; ++i) out[i] = std::pow(std::fabs(x[i]), p);
}

double sum_abs_pow(const double* x, std::size_t n, double p) {
  const __m256d vp = _mm256_set1_pd(p);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, abs_pow4(x + i, vp, p));
  double s = hsum(acc);
  for (; i < n; ++i) s += std::pow(std::fabs(x[i]), p);
  return s;
}

double lag_product_sum(const double* a, std::size_t n) {
  if (n < 2) return 0.0;
  const std::size_t m = n - 1;
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(a + i + 1), acc);
  double s = hsum(acc);
  for (; i < m; ++i) s += a[i] * a[i + 1];
  return s;
}

double triple_product_sum(const double* a, std::size_t n) {
  if (n < 3) return 0.0;
  const std::size_t m = n - 2;
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    const __m256d p = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(a + i + 1));
    acc = _mm256_fmadd_pd(p, _mm256_loadu_pd(a + i + 2), acc);
  }
  double s = hsum(acc);
  for (; i < m; ++i) s += a[i] * a[i + 1] * a[i + 2];
  return s;
}

void pair_diff(const double* x, std::size_t n_out, double* out) {
  std::size_t l = 0;
  for (; l + 4 <= n_out; l += 4) {
    const __m256d a = _mm256_loadu_pd(x + 2 * l);
    const __m256d b = _mm256_loadu_pd(x + 2 * l + 4);
    // (a1−a0, b1−b0, a3−a2, b3−b2) then restore output order.
    const __m256d d = _mm256_hsub_pd(_mm256_permute_pd(a, 0x5), _mm256_permute_pd(b, 0x5));
    _mm256_storeu_pd(out + l, _mm256_permute4x64_pd(d, _MM_SHUFFLE(3, 1, 2, 0)));
  }
  for (; l < n_out; ++l) out[l] = x[2 * l + 1] - x[2 * l];
}

void triple_combo(const double* x, std::size_t n_out, double w, double* out) {
  const __m256i idx = _mm256_setr_epi64x(0, 3, 6, 9);
  const __m256d vw = _mm256_set1_pd(w);
  std::size_t l = 0;
  for (; l + 4 <= n_out; l += 4) {
    const double* base = x + 3 * l;
    const __m256d a = _mm256_i64gather_pd(base, idx, 8);
    const __m256d b = _mm256_i64gather_pd(base + 1, idx, 8);
    const __m256d c = _mm256_i64gather_pd(base + 2, idx, 8);
    _mm256_storeu_pd(out + l, _mm256_sub_pd(_mm256_add_pd(a, c), _mm256_mul_pd(vw, b)));
  }
  for (; l < n_out; ++l) out[l] = (x[3 * l] + x[3 * l + 2]) - w * x[3 * l + 1];
}

}  // namespace simd

const Table* avx2_table_impl() {
  static const Table t{
      .name = "avx2",
      .sum = &simd::sum,
      .sum_sign = &simd::sum_sign,
      .sum_log_abs = &simd::sum_log_abs,
      .sum_sq_dev = &simd::sum_sq_dev,
      .log_abs = &simd::log_abs,
      .abs_pow = &simd::abs_pow,
      .sum_abs_pow = &simd::sum_abs_pow,
      .lag_product_sum = &simd::lag_product_sum,
      .triple_product_sum = &simd::triple_product_sum,
      .pair_diff = &simd::pair_diff,
      .triple_combo = &simd::triple_combo,
  };
  return &t;
}

}  // namespace levy::kernels
