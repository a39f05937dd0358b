#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cstddef>

#include "bipartite/kernels.hpp"

// AVX2+FMA kernels. This translation unit is compiled with -mavx2 -mfma;
// dispatch.cpp only installs the table after a cpuid check.

namespace bipartite::kernels {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();
  __m256d acc3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 8), _mm256_loadu_pd(b + i + 8), acc2);
    acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 12), _mm256_loadu_pd(b + i + 12), acc3);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double s = hsum(_mm256_add_pd(_mm256_add_pd(acc0, acc1), _mm256_add_pd(acc2, acc3)));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double dot3_avx2(const double* a, const double* b, const double* w,
                 std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256d p0 = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    __m256d p1 = _mm256_mul_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
    acc0 = _mm256_fmadd_pd(p0, _mm256_loadu_pd(w + i), acc0);
    acc1 = _mm256_fmadd_pd(p1, _mm256_loadu_pd(w + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    __m256d p = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc0 = _mm256_fmadd_pd(p, _mm256_loadu_pd(w + i), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i] * w[i];
  return s;
}

double sum_avx2(const double* a, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(a + i));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(a + i + 4));
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(a + i));
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i];
  return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

// exp for 4 doubles, Cephes-style: n = round(x/ln2), r = x - n*ln2 in two
// parts, e^r from a [2,3] rational in r^2, then scale by 2^n via the
// exponent field. Inputs below -708.396 flush to 0 (the subnormal window
// is sacrificed), above 709.783 saturate to +inf, NaN propagates.
inline __m256d exp4(__m256d x) {
  const __m256d exp_hi = _mm256_set1_pd(709.782712893383996732);
  const __m256d exp_lo = _mm256_set1_pd(-708.396418532264106224);
  const __m256d log2e = _mm256_set1_pd(1.44269504088896340736);
  const __m256d c1 = _mm256_set1_pd(6.93145751953125e-1);
  const __m256d c2 = _mm256_set1_pd(1.42860682030941723212e-6);
  const __m256d p0 = _mm256_set1_pd(1.26177193074810590878e-4);
  const __m256d p1 = _mm256_set1_pd(3.02994407707441961300e-2);
  const __m256d p2 = _mm256_set1_pd(9.99999999999999999910e-1);
  const __m256d q0 = _mm256_set1_pd(3.00198505138664455042e-6);
  const __m256d q1 = _mm256_set1_pd(2.52448340349684104192e-3);
  const __m256d q2 = _mm256_set1_pd(2.27265548208155028766e-1);
  const __m256d q3 = _mm256_set1_pd(2.00000000000000000005e0);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d half = _mm256_set1_pd(0.5);

  __m256d xc = _mm256_min_pd(_mm256_max_pd(x, exp_lo), exp_hi);
  __m256d n = _mm256_round_pd(_mm256_mul_pd(xc, log2e),
                              _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, c1, xc);
  r = _mm256_fnmadd_pd(n, c2, r);

  __m256d rr = _mm256_mul_pd(r, r);
  __m256d px = _mm256_fmadd_pd(p0, rr, p1);
  px = _mm256_fmadd_pd(px, rr, p2);
  px = _mm256_mul_pd(px, r);
  __m256d qx = _mm256_fmadd_pd(q0, rr, q1);
  qx = _mm256_fmadd_pd(qx, rr, q2);
  qx = _mm256_fmadd_pd(qx, rr, q3);
  __m256d e = _mm256_div_pd(px, _mm256_sub_pd(qx, px));
  e = _mm256_fmadd_pd(e, _mm256_set1_pd(2.0), one);

  // Scale by 2^n through the exponent field, split in two factors so
  // n close to the +/-1022 bounds cannot overflow a single scale.
  __m256d n_lo = _mm256_floor_pd(_mm256_mul_pd(n, half));
  __m256d n_hi = _mm256_sub_pd(n, n_lo);
  __m128i ni_lo = _mm256_cvtpd_epi32(n_lo);
  __m128i ni_hi = _mm256_cvtpd_epi32(n_hi);
  __m256d two_lo = _mm256_castsi256_pd(_mm256_slli_epi64(
      _mm256_add_epi64(_mm256_cvtepi32_epi64(ni_lo), _mm256_set1_epi64x(1023)),
      52));
  __m256d two_hi = _mm256_castsi256_pd(_mm256_slli_epi64(
      _mm256_add_epi64(_mm256_cvtepi32_epi64(ni_hi), _mm256_set1_epi64x(1023)),
      52));
  __m256d res = _mm256_mul_pd(_mm256_mul_pd(e, two_lo), two_hi);

  // Edge masks on the original input.
  __m256d gt = _mm256_cmp_pd(x, exp_hi, _CMP_GT_OQ);
  __m256d lt = _mm256_cmp_pd(x, exp_lo, _CMP_LT_OQ);
  __m256d isnan = _mm256_cmp_pd(x, x, _CMP_UNORD_Q);
  res = _mm256_blendv_pd(res, _mm256_set1_pd(__builtin_inf()), gt);
  res = _mm256_blendv_pd(res, _mm256_setzero_pd(), lt);
  res = _mm256_blendv_pd(res, x, isnan);
  return res;
}

void exp_avx2(const double* a, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, exp4(_mm256_loadu_pd(a + i)));
  if (i < n) {
    double buf_in[4] = {0, 0, 0, 0};
    double buf_out[4];
    for (std::size_t k = i; k < n; ++k) buf_in[k - i] = a[k];
    _mm256_storeu_pd(buf_out, exp4(_mm256_loadu_pd(buf_in)));
    for (std::size_t k = i; k < n; ++k) out[k] = buf_out[k - i];
  }
}

}  // namespace

const Ops& avx2_ops() {
  static const Ops ops{"avx2",   dot_avx2,  dot3_avx2,
                       sum_avx2, axpy_avx2, exp_avx2};
  return ops;
}

bool cpu_supports_avx2() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

}  // namespace bipartite::kernels

#endif  // x86_64
