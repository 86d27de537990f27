#include "gwpt/kernels.hpp"

#include <cstdlib>
#include <limits>

namespace gwpt::kernels {

namespace scalar {

double reduce_add(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i];
  return s;
}

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

MinMax minmax(const double* x, std::size_t n) {
  MinMax r{std::numeric_limits<double>::infinity(),
           -std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] < r.min) r.min = x[i];
    if (x[i] > r.max) r.max = x[i];
  }
  return r;
}

std::size_t count_sign_changes(const double* x, std::size_t n, double center) {
  if (n < 2) return 0;
  std::size_t count = 0;
  bool prev = (x[0] - center) >= 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    bool cur = (x[i] - center) >= 0.0;
    count += (cur != prev);
    prev = cur;
  }
  return count;
}

}  // namespace scalar

namespace {

bool use_avx2() {
#if GWPT_HAVE_AVX2_KERNELS
  if (std::getenv("GWPT_NO_SIMD") != nullptr) return false;
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const bool g_avx2 = use_avx2();

}  // namespace

double reduce_add(const double* x, std::size_t n) {
#if GWPT_HAVE_AVX2_KERNELS
  if (g_avx2) return avx2::reduce_add(x, n);
#endif
  return scalar::reduce_add(x, n);
}

double dot(const double* a, const double* b, std::size_t n) {
#if GWPT_HAVE_AVX2_KERNELS
  if (g_avx2) return avx2::dot(a, b, n);
#endif
  return scalar::dot(a, b, n);
}

void axpy(double a, const double* x, double* y, std::size_t n) {
#if GWPT_HAVE_AVX2_KERNELS
  if (g_avx2) return avx2::axpy(a, x, y, n);
#endif
  scalar::axpy(a, x, y, n);
}

MinMax minmax(const double* x, std::size_t n) {
#if GWPT_HAVE_AVX2_KERNELS
  if (g_avx2) return avx2::minmax(x, n);
#endif
  return scalar::minmax(x, n);
}

std::size_t count_sign_changes(const double* x, std::size_t n, double center) {
#if GWPT_HAVE_AVX2_KERNELS
  if (g_avx2) return avx2::count_sign_changes(x, n, center);
#endif
  return scalar::count_sign_changes(x, n, center);
}

const char* active_backend() { return g_avx2 ? "avx2+fma" : "scalar"; }

}  // namespace gwpt::kernels
