// AVX2 + FMA variants. This translation unit alone is compiled with
// -mavx2 -mfma; nothing here may be called unless the dispatcher has
// confirmed CPU support.

#include "npcrel/kernels/kernels.hpp"

#include <immintrin.h>

#include <cmath>

namespace npc::kernels::avx2 {
namespace {

constexpr std::size_t kWidth = 4;  // doubles per __m256d

double horizontal_sum(__m256d v) noexcept {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

// exp(x) for |x| < 708: Cody-Waite reduction by ln2, degree-13 Taylor
// polynomial on |r| <= ln2/2 (truncation < 5e-18), then scale by 2^n through
// the exponent field.
__m256d exp_pd(__m256d x) noexcept {
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634074);
  const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
  const __m256d magic = _mm256_set1_pd(6755399441055744.0);  // 1.5 * 2^52

  x = _mm256_max_pd(_mm256_min_pd(x, _mm256_set1_pd(708.0)), _mm256_set1_pd(-708.0));
  __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, ln2_hi, x);
  r = _mm256_fnmadd_pd(n, ln2_lo, r);

  static constexpr double inv_fact[] = {
      1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0, 1.0 / 362880.0,
      1.0 / 40320.0,      1.0 / 5040.0,      1.0 / 720.0,      1.0 / 120.0,     1.0 / 24.0,
      1.0 / 6.0,          0.5,               1.0,              1.0};
  __m256d p = _mm256_set1_pd(inv_fact[0]);
  for (std::size_t k = 1; k < std::size(inv_fact); ++k) {
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(inv_fact[k]));
  }

  __m256i bits = _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(n, magic)),
                                  _mm256_castpd_si256(magic));
  bits = _mm256_slli_epi64(_mm256_add_epi64(bits, _mm256_set1_epi64x(1023)), 52);
  return _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
}

}  // namespace

double conduction_sum(const double* current, const double* weight, std::size_t n, double r,
                      double v0) noexcept {
  const __m256d vr = _mm256_set1_pd(r);
  const __m256d vv0 = _mm256_set1_pd(v0);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  const std::size_t end2 = n / (2 * kWidth) * (2 * kWidth);
  std::size_t k = 0;
  for (; k < end2; k += 2 * kWidth) {
    __m256d i0 = _mm256_loadu_pd(current + k);
    __m256d i1 = _mm256_loadu_pd(current + k + kWidth);
    __m256d p0 = _mm256_mul_pd(_mm256_fmadd_pd(vr, i0, vv0), i0);
    __m256d p1 = _mm256_mul_pd(_mm256_fmadd_pd(vr, i1, vv0), i1);
    acc0 = _mm256_fmadd_pd(p0, _mm256_loadu_pd(weight + k), acc0);
    acc1 = _mm256_fmadd_pd(p1, _mm256_loadu_pd(weight + k + kWidth), acc1);
  }
  for (; k + kWidth <= n; k += kWidth) {
    __m256d i0 = _mm256_loadu_pd(current + k);
    __m256d p0 = _mm256_mul_pd(_mm256_fmadd_pd(vr, i0, vv0), i0);
    acc0 = _mm256_fmadd_pd(p0, _mm256_loadu_pd(weight + k), acc0);
  }
  double sum = horizontal_sum(_mm256_add_pd(acc0, acc1));
  for (; k < n; ++k) {
    sum += (r * current[k] + v0) * current[k] * weight[k];
  }
  return sum;
}

double dot(const double* a, const double* b, std::size_t n) noexcept {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  const std::size_t end2 = n / (2 * kWidth) * (2 * kWidth);
  std::size_t k = 0;
  for (; k < end2; k += 2 * kWidth) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k + kWidth), _mm256_loadu_pd(b + k + kWidth), acc1);
  }
  for (; k + kWidth <= n; k += kWidth) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc0);
  }
  double sum = horizontal_sum(_mm256_add_pd(acc0, acc1));
  for (; k < n; ++k) {
    sum += a[k] * b[k];
  }
  return sum;
}

void double_exponential(const double* x, std::size_t n, double a, double b, double c, double d,
                        double* out) noexcept {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  const __m256d vc = _mm256_set1_pd(c);
  const __m256d vd = _mm256_set1_pd(d);
  std::size_t k = 0;
  for (; k + kWidth <= n; k += kWidth) {
    __m256d vx = _mm256_loadu_pd(x + k);
    __m256d e1 = exp_pd(_mm256_mul_pd(vb, vx));
    __m256d e2 = exp_pd(_mm256_mul_pd(vd, vx));
    _mm256_storeu_pd(out + k, _mm256_fmadd_pd(va, e1, _mm256_mul_pd(vc, e2)));
  }
  for (; k < n; ++k) {
    out[k] = a * std::exp(b * x[k]) + c * std::exp(d * x[k]);
  }
}

}  // namespace npc::kernels::avx2
