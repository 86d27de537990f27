#include "gwpt/kernels.hpp"

#if GWPT_HAVE_AVX2_KERNELS

#include <immintrin.h>

#include <algorithm>
#include <cstdint>
#include <limits>

namespace gwpt::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

}  // namespace

double reduce_add(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i];
  return s;
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

MinMax minmax(const double* x, std::size_t n) {
  MinMax r{std::numeric_limits<double>::infinity(),
           -std::numeric_limits<double>::infinity()};
  std::size_t i = 0;
  if (n >= 4) {
    __m256d vmin = _mm256_loadu_pd(x);
    __m256d vmax = vmin;
    for (i = 4; i + 4 <= n; i += 4) {
      __m256d v = _mm256_loadu_pd(x + i);
      vmin = _mm256_min_pd(vmin, v);
      vmax = _mm256_max_pd(vmax, v);
    }
    double bmin[4], bmax[4];
    _mm256_storeu_pd(bmin, vmin);
    _mm256_storeu_pd(bmax, vmax);
    for (int k = 0; k < 4; ++k) {
      if (bmin[k] < r.min) r.min = bmin[k];
      if (bmax[k] > r.max) r.max = bmax[k];
    }
  }
  for (; i < n; ++i) {
    if (x[i] < r.min) r.min = x[i];
    if (x[i] > r.max) r.max = x[i];
  }
  return r;
}

// Sign bits are packed into 64-bit words via movemask; transitions are
// counted with one popcount per word. Exact integer result, bit-identical
// to the scalar kernel.
std::size_t count_sign_changes(const double* x, std::size_t n, double center) {
  if (n < 2) return 0;
  const __m256d vc = _mm256_set1_pd(center);
  std::size_t count = 0;
  int carry = -1;
  std::size_t i = 0;
  while (i < n) {
    const std::size_t nb = std::min<std::size_t>(64, n - i);
    std::uint64_t w = 0;
    std::size_t j = 0;
    for (; j + 4 <= nb; j += 4) {
      __m256d v = _mm256_loadu_pd(x + i + j);
      int m = _mm256_movemask_pd(_mm256_cmp_pd(v, vc, _CMP_GE_OQ));
      w |= static_cast<std::uint64_t>(m) << j;
    }
    for (; j < nb; ++j) {
      w |= static_cast<std::uint64_t>((x[i + j] - center) >= 0.0) << j;
    }
    if (nb >= 2) {
      const std::uint64_t mask =
          (nb == 64) ? (~0ull >> 1) : ((1ull << (nb - 1)) - 1);
      count += static_cast<std::size_t>(__builtin_popcountll((w ^ (w >> 1)) & mask));
    }
    if (carry >= 0) {
      count += static_cast<std::size_t>((static_cast<std::uint64_t>(carry) ^ w) & 1ull);
    }
    carry = static_cast<int>((w >> (nb - 1)) & 1ull);
    i += nb;
  }
  return count;
}

}  // namespace gwpt::kernels::avx2

#endif  // GWPT_HAVE_AVX2_KERNELS
