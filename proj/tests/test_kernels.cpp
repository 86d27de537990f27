#include "gwpt/kernels.hpp"

#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

namespace k = gwpt::kernels;

namespace {

bool have_avx2() {
#if GWPT_HAVE_AVX2_KERNELS
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n, double lo,
                               double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

long double reference_dot(const std::vector<double>& a,
                          const std::vector<double>& b) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += static_cast<long double>(a[i]) * static_cast<long double>(b[i]);
  }
  return s;
}

}  // namespace

TEST_CASE("scalar kernels match a long-double reference") {
  std::mt19937_64 rng(11);
  for (std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{3},
                        std::size_t{4}, std::size_t{17}, std::size_t{64},
                        std::size_t{67}, std::size_t{257}}) {
    const auto a = random_vec(rng, n, -10.0, 10.0);
    const auto b = random_vec(rng, n, -10.0, 10.0);
    const double ref = static_cast<double>(reference_dot(a, b));
    CHECK(k::scalar::dot(a.data(), b.data(), n) ==
          doctest::Approx(ref).epsilon(1e-12));
    long double sum = 0.0L;
    for (double x : a) sum += x;
    CHECK(k::scalar::reduce_add(a.data(), n) ==
          doctest::Approx(static_cast<double>(sum)).epsilon(1e-12));
  }
}

TEST_CASE("avx2 kernels agree with scalar kernels") {
  if (!have_avx2()) return;
#if GWPT_HAVE_AVX2_KERNELS
  std::mt19937_64 rng(23);
  for (std::size_t n = 0; n <= 70; ++n) {
    const auto a = random_vec(rng, n, -5.0, 5.0);
    const auto b = random_vec(rng, n, -5.0, 5.0);

    CHECK(k::avx2::reduce_add(a.data(), n) ==
          doctest::Approx(k::scalar::reduce_add(a.data(), n)).epsilon(1e-13));
    CHECK(k::avx2::dot(a.data(), b.data(), n) ==
          doctest::Approx(k::scalar::dot(a.data(), b.data(), n)).epsilon(1e-13));

    // minmax and sign counting are comparison-only: bit-exact.
    if (n > 0) {
      const k::MinMax ms = k::scalar::minmax(a.data(), n);
      const k::MinMax mv = k::avx2::minmax(a.data(), n);
      CHECK(ms.min == mv.min);
      CHECK(ms.max == mv.max);
    }
    for (double center : {0.0, 0.25, -1.0}) {
      CHECK(k::scalar::count_sign_changes(a.data(), n, center) ==
            k::avx2::count_sign_changes(a.data(), n, center));
    }

    std::vector<double> y1 = b, y2 = b;
    k::scalar::axpy(1.7, a.data(), y1.data(), n);
    k::avx2::axpy(1.7, a.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-14));
    }
  }
#endif
}

TEST_CASE("sign change counting across word boundaries") {
  // 130 values spans three 64-bit words in the AVX2 path.
  std::vector<double> alt(130);
  for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = (i % 2 == 0) ? 1.0 : -1.0;
  CHECK(k::count_sign_changes(alt.data(), alt.size(), 0.0) == alt.size() - 1);

  std::vector<double> flat(130, 2.5);
  CHECK(k::count_sign_changes(flat.data(), flat.size(), 2.5) == 0);

  // sign(0) counts as positive.
  std::vector<double> z{0.0, -1.0, 0.0, 1.0};
  CHECK(k::count_sign_changes(z.data(), z.size(), 0.0) == 2);
}

TEST_CASE("dispatched kernels are usable") {
  CHECK(k::active_backend() != nullptr);
  std::vector<double> v{1.0, 2.0, 3.0};
  CHECK(k::reduce_add(v.data(), v.size()) == doctest::Approx(6.0));
  const k::MinMax mm = k::minmax(v.data(), v.size());
  CHECK(mm.min == 1.0);
  CHECK(mm.max == 3.0);
}
