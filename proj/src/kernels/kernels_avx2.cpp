#include "aocsim/kernels.hpp"

#if AOCSIM_HAVE_AVX2_BACKEND

#include <immintrin.h>

#include <cstdint>

namespace aocsim::kernels::avx2 {
namespace {

// log2 for positive finite lanes. Splits x into m * 2^e with
// m in [sqrt(2)/2, sqrt(2)), then log(m) = 2 atanh(s) with s = (m-1)/(m+1),
// |s| <= 3 - 2 sqrt(2). Ten odd series terms leave the truncation error
// below 3e-17 relative, so rounding dominates (a few ulp overall).
inline __m256d log2_pd(__m256d x) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d sqrt_half = _mm256_set1_pd(0.70710678118654752440);
  const __m256d log2e = _mm256_set1_pd(1.44269504088896340736);

  __m256i bits = _mm256_castpd_si256(x);
  __m256i exp_bits = _mm256_srli_epi64(
      _mm256_and_si256(bits, _mm256_set1_epi64x(0x7FF0000000000000LL)), 52);
  __m256i e64 = _mm256_sub_epi64(exp_bits, _mm256_set1_epi64x(1022));
  // lanes fit in int32, so pack the low halves and widen to double
  __m128i e32 = _mm256_castsi256_si128(_mm256_permutevar8x32_epi32(
      e64, _mm256_setr_epi32(0, 2, 4, 6, 0, 0, 0, 0)));
  __m256d e = _mm256_cvtepi32_pd(e32);

  __m256d m = _mm256_castsi256_pd(_mm256_or_si256(
      _mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL)),
      _mm256_set1_epi64x(0x3FE0000000000000LL)));  // m in [0.5, 1)
  __m256d low = _mm256_cmp_pd(m, sqrt_half, _CMP_LT_OQ);
  m = _mm256_blendv_pd(m, _mm256_add_pd(m, m), low);
  e = _mm256_sub_pd(e, _mm256_and_pd(low, one));

  __m256d s =
      _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  __m256d t = _mm256_mul_pd(s, s);
  __m256d poly = _mm256_set1_pd(1.0 / 19.0);
  poly = _mm256_fmadd_pd(poly, t, _mm256_set1_pd(1.0 / 17.0));
  poly = _mm256_fmadd_pd(poly, t, _mm256_set1_pd(1.0 / 15.0));
  poly = _mm256_fmadd_pd(poly, t, _mm256_set1_pd(1.0 / 13.0));
  poly = _mm256_fmadd_pd(poly, t, _mm256_set1_pd(1.0 / 11.0));
  poly = _mm256_fmadd_pd(poly, t, _mm256_set1_pd(1.0 / 9.0));
  poly = _mm256_fmadd_pd(poly, t, _mm256_set1_pd(1.0 / 7.0));
  poly = _mm256_fmadd_pd(poly, t, _mm256_set1_pd(1.0 / 5.0));
  poly = _mm256_fmadd_pd(poly, t, _mm256_set1_pd(1.0 / 3.0));
  poly = _mm256_fmadd_pd(poly, t, one);
  __m256d log_m = _mm256_mul_pd(_mm256_add_pd(s, s), poly);
  return _mm256_fmadd_pd(log_m, log2e, e);
}

// exp2 with arguments saturated to the finite range; callers only feed it
// alpha * log2(k), which stays far from the clamp in any valid scenario.
inline __m256d exp2_pd(__m256d y) {
  const __m256d ln2 = _mm256_set1_pd(0.69314718055994530942);

  y = _mm256_max_pd(y, _mm256_set1_pd(-1021.5));
  y = _mm256_min_pd(y, _mm256_set1_pd(1023.49));
  __m256d n = _mm256_round_pd(y, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d u = _mm256_mul_pd(_mm256_sub_pd(y, n), ln2);  // |u| <= ln(2)/2

  __m256d poly = _mm256_set1_pd(1.0 / 87178291200.0);  // 1/14!
  poly = _mm256_fmadd_pd(poly, u, _mm256_set1_pd(1.0 / 6227020800.0));
  poly = _mm256_fmadd_pd(poly, u, _mm256_set1_pd(1.0 / 479001600.0));
  poly = _mm256_fmadd_pd(poly, u, _mm256_set1_pd(1.0 / 39916800.0));
  poly = _mm256_fmadd_pd(poly, u, _mm256_set1_pd(1.0 / 3628800.0));
  poly = _mm256_fmadd_pd(poly, u, _mm256_set1_pd(1.0 / 362880.0));
  poly = _mm256_fmadd_pd(poly, u, _mm256_set1_pd(1.0 / 40320.0));
  poly = _mm256_fmadd_pd(poly, u, _mm256_set1_pd(1.0 / 5040.0));
  poly = _mm256_fmadd_pd(poly, u, _mm256_set1_pd(1.0 / 720.0));
  poly = _mm256_fmadd_pd(poly, u, _mm256_set1_pd(1.0 / 120.0));
  poly = _mm256_fmadd_pd(poly, u, _mm256_set1_pd(1.0 / 24.0));
  poly = _mm256_fmadd_pd(poly, u, _mm256_set1_pd(1.0 / 6.0));
  poly = _mm256_fmadd_pd(poly, u, _mm256_set1_pd(0.5));
  poly = _mm256_fmadd_pd(poly, u, _mm256_set1_pd(1.0));
  poly = _mm256_fmadd_pd(poly, u, _mm256_set1_pd(1.0));

  __m128i n32 = _mm256_cvtpd_epi32(n);  // exact: n is integral, |n| <= 1023
  __m256i scale = _mm256_slli_epi64(
      _mm256_add_epi64(_mm256_cvtepi32_epi64(n32),
                       _mm256_set1_epi64x(1023)),
      52);
  return _mm256_mul_pd(poly, _mm256_castsi256_pd(scale));
}

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

}  // namespace

void aoc_update(double* k, const double* served, const double* vanish,
                const double* wmax, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d next = _mm256_sub_pd(
        _mm256_add_pd(_mm256_loadu_pd(k + i), _mm256_loadu_pd(served + i)),
        _mm256_loadu_pd(vanish + i));
    next = _mm256_max_pd(next, zero);
    next = _mm256_min_pd(_mm256_loadu_pd(wmax + i), next);
    _mm256_storeu_pd(k + i, next);
  }
  if (i < n) scalar::aoc_update(k + i, served + i, vanish + i, wmax + i, n - i);
}

void accuracy_batch(double* out, const double* k, const double* a0,
                    const double* a1, const double* alpha, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d hundred = _mm256_set1_pd(100.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d kv = _mm256_loadu_pd(k + i);
    __m256d pos = _mm256_cmp_pd(kv, zero, _CMP_GT_OQ);
    // non-positive lanes go through log2 at 1.0, then the pow is masked off
    __m256d safe = _mm256_blendv_pd(one, kv, pos);
    __m256d p =
        exp2_pd(_mm256_mul_pd(_mm256_loadu_pd(alpha + i), log2_pd(safe)));
    p = _mm256_and_pd(p, pos);
    __m256d v = log2_pd(_mm256_add_pd(one, p));
    __m256d a = _mm256_div_pd(
        _mm256_fmadd_pd(_mm256_loadu_pd(a1 + i), v, _mm256_loadu_pd(a0 + i)),
        hundred);
    a = _mm256_min_pd(_mm256_max_pd(a, zero), one);
    _mm256_storeu_pd(out + i, a);
  }
  if (i < n)
    scalar::accuracy_batch(out + i, k + i, a0 + i, a1 + i, alpha + i, n - i);
}

double sum(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double r = hsum(acc);
  for (; i < n; ++i) r += x[i];
  return r;
}

double dot2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  double r = hsum(acc);
  for (; i < n; ++i) r += x[i] * y[i];
  return r;
}

double one_minus_dot2(const double* w, const double* x, std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_sub_pd(one, _mm256_loadu_pd(w + i)),
                          _mm256_loadu_pd(x + i), acc);
  double r = hsum(acc);
  for (; i < n; ++i) r += (1.0 - w[i]) * x[i];
  return r;
}

}  // namespace aocsim::kernels::avx2

#endif  // AOCSIM_HAVE_AVX2_BACKEND
