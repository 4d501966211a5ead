#include "ded/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

namespace ded::simd {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) acc += a[k] * b[k];
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) y[k] += alpha * x[k];
}

double gather_dot_scalar(const std::int32_t* idx, const double* vals,
                         std::size_t n, const double* dense) {
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) acc += vals[k] * dense[idx[k]];
  return acc;
}

double max_abs_scalar(const double* a, std::size_t n) {
  double m = 0.0;
  for (std::size_t k = 0; k < n; ++k) m = std::max(m, std::fabs(a[k]));
  return m;
}

constexpr Kernels kScalar{dot_scalar, axpy_scalar, gather_dot_scalar,
                          max_abs_scalar, "scalar"};

const Kernels* resolve() {
  const Kernels* avx2 = avx2_kernels();
  if (const char* pin = std::getenv("DED_KERNELS")) {
    if (std::strcmp(pin, "scalar") == 0) return &kScalar;
    if (std::strcmp(pin, "avx2") == 0 && avx2) return avx2;
  }
  return avx2 ? avx2 : &kScalar;
}

}  // namespace

const Kernels& scalar_kernels() { return kScalar; }

const Kernels& active() {
  static const Kernels* chosen = resolve();
  return *chosen;
}

}  // namespace ded::simd
