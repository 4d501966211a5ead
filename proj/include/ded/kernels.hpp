#pragma once

#include <cstddef>
#include <cstdint>

// Small dense/sparse vector kernels used by the LP engine's hot loops
// (pricing, BTRAN/FTRAN sweeps, infeasibility norms).  A scalar reference
// implementation always exists; an AVX2 variant is selected at runtime when
// the CPU supports it.  DED_KERNELS=scalar|avx2 in the environment pins the
// choice (the latter fails over to scalar if unsupported).

namespace ded::simd {

struct Kernels {
  // sum_k a[k] * b[k]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y[k] += alpha * x[k]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // sum_k vals[k] * dense[idx[k]]
  double (*gather_dot)(const std::int32_t* idx, const double* vals,
                       std::size_t n, const double* dense);
  // max_k |a[k]|, 0 for empty input
  double (*max_abs)(const double* a, std::size_t n);
  const char* name;
};

const Kernels& scalar_kernels();
// nullptr when the binary lacks AVX2 code or the CPU lacks the feature.
const Kernels* avx2_kernels();
// Resolved once on first use.
const Kernels& active();

inline double dot(const double* a, const double* b, std::size_t n) {
  return active().dot(a, b, n);
}
inline void axpy(double alpha, const double* x, double* y, std::size_t n) {
  active().axpy(alpha, x, y, n);
}
inline double gather_dot(const std::int32_t* idx, const double* vals,
                         std::size_t n, const double* dense) {
  return active().gather_dot(idx, vals, n, dense);
}
inline double max_abs(const double* a, std::size_t n) {
  return active().max_abs(a, n);
}

}  // namespace ded::simd
