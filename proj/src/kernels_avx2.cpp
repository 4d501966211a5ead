#include "ded/kernels.hpp"

#ifdef DED_BUILD_AVX2

#include <immintrin.h>

#include <cmath>

namespace ded::simd {
namespace {

double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k + 4), _mm256_loadu_pd(b + k + 4), acc1);
  }
  if (k + 4 <= n) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc0);
    k += 4;
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; k < n; ++k) acc += a[k] * b[k];
  return acc;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d vy = _mm256_loadu_pd(y + k);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + k), vy);
    _mm256_storeu_pd(y + k, vy);
  }
  for (; k < n; ++k) y[k] += alpha * x[k];
}

double gather_dot_avx2(const std::int32_t* idx, const double* vals,
                       std::size_t n, const double* dense) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m128i vi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + k));
    __m256d g = _mm256_i32gather_pd(dense, vi, 8);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(vals + k), g, acc);
  }
  double s = hsum(acc);
  for (; k < n; ++k) s += vals[k] * dense[idx[k]];
  return s;
}

double max_abs_avx2(const double* a, std::size_t n) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d vm = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d v = _mm256_andnot_pd(sign_mask, _mm256_loadu_pd(a + k));
    vm = _mm256_max_pd(vm, v);
  }
  double m = 0.0;
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, vm);
  for (double lane : lanes) m = std::max(m, lane);
  for (; k < n; ++k) m = std::max(m, std::fabs(a[k]));
  return m;
}

constexpr Kernels kAvx2{dot_avx2, axpy_avx2, gather_dot_avx2, max_abs_avx2,
                        "avx2"};

}  // namespace

const Kernels* avx2_kernels() {
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return &kAvx2;
  return nullptr;
}

}  // namespace ded::simd

#else

namespace ded::simd {
const Kernels* avx2_kernels() { return nullptr; }
}  // namespace ded::simd

#endif
