#pragma once

#include <cstddef>

// Arithmetic kernels behind the pipeline's inner loops: corpus-wide
// sign-change counting, covariance accumulation and PCA transforms.
// Each kernel has a scalar reference implementation and, on x86-64, an
// AVX2/FMA variant. The dispatched entry points bind once per process from
// CPUID; setting GWPT_NO_SIMD=1 in the environment forces the scalar set.
// Both variant namespaces stay visible so tests can compare them directly.

namespace gwpt::kernels {

struct MinMax {
  double min;
  double max;
};

namespace scalar {
double reduce_add(const double* x, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
// y[i] += a * x[i]
void axpy(double a, const double* x, double* y, std::size_t n);
MinMax minmax(const double* x, std::size_t n);
// Number of i with sign(x[i]-center) != sign(x[i+1]-center), sign(0) = +.
std::size_t count_sign_changes(const double* x, std::size_t n, double center);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define GWPT_HAVE_AVX2_KERNELS 1
namespace avx2 {
double reduce_add(const double* x, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
MinMax minmax(const double* x, std::size_t n);
std::size_t count_sign_changes(const double* x, std::size_t n, double center);
}  // namespace avx2
#endif

// Dispatched entry points.
double reduce_add(const double* x, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
MinMax minmax(const double* x, std::size_t n);
std::size_t count_sign_changes(const double* x, std::size_t n, double center);

// "avx2+fma" or "scalar".
const char* active_backend();

}  // namespace gwpt::kernels
