#include "gwpt/freq_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <doctest.h>

using namespace gwpt;
namespace fa = gwpt::freq_analysis;

namespace {

EmbeddedSentence sentence_from_rows(const std::vector<std::vector<double>>& rows) {
  EmbeddedSentence s(rows.size(), rows[0].size());
  for (std::size_t l = 0; l < rows.size(); ++l) {
    for (std::size_t m = 0; m < rows[l].size(); ++m) s.at(l, m) = rows[l][m];
  }
  return s;
}

// Test-local oracle: perpendicular distance of each sorted point to the
// end-to-end chord, scanned over all positions.
std::vector<double> chord_distances(const std::vector<double>& y) {
  const double dx = static_cast<double>(y.size() - 1);
  const double dy = y.back() - y.front();
  const double norm = std::hypot(dx, dy);
  std::vector<double> d(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    d[i] = std::abs(dy * static_cast<double>(i) - dx * (y[i] - y.front())) / norm;
  }
  return d;
}

fa::FrequencyProfile profile_from_values(std::vector<double> values) {
  fa::FrequencyProfile p;
  p.avg_nsc = std::move(values);
  p.sorted_order.resize(p.avg_nsc.size());
  for (std::size_t i = 0; i < p.sorted_order.size(); ++i) {
    p.sorted_order[i] = static_cast<std::uint32_t>(i);
  }
  std::stable_sort(p.sorted_order.begin(), p.sorted_order.end(),
                   [&](std::uint32_t a, std::uint32_t b) {
                     return p.avg_nsc[a] < p.avg_nsc[b];
                   });
  return p;
}

}  // namespace

TEST_CASE("nsc hand cases") {
  std::vector<double> alternating{1.0, -1.0, 1.0, -1.0};
  CHECK(fa::nsc(alternating) == 1.0);

  std::vector<double> constant{5.0, 5.0, 5.0, 5.0};
  CHECK(fa::nsc(constant) == 0.0);  // zero-mean row is all zeros, sign(0) = +

  std::vector<double> ramp{1.0, 2.0, 3.0, 4.0};
  CHECK(fa::nsc(ramp) == doctest::Approx(1.0 / 3.0));

  std::vector<double> tiny{1.0};
  CHECK_THROWS_AS(fa::nsc(tiny), Error);
}

TEST_CASE("nsc is shift and positive-scale invariant") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> value(-2.0, 2.0);
  std::uniform_real_distribution<double> shift(-5.0, 5.0);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  for (int trial = 0; trial < 1000; ++trial) {
    std::uniform_int_distribution<std::size_t> len(2, 40);
    std::vector<double> row(len(rng));
    for (double& x : row) x = value(rng);
    const double base = fa::nsc(row);
    CHECK(base >= 0.0);
    CHECK(base <= 1.0);

    std::vector<double> shifted = row;
    const double c = shift(rng);
    for (double& x : shifted) x += c;
    CHECK(fa::nsc(shifted) == base);

    std::vector<double> scaled = row;
    const double a = scale(rng);
    for (double& x : scaled) x *= a;
    CHECK(fa::nsc(scaled) == base);
  }
}

TEST_CASE("frequency profile averages eligible sentences") {
  const auto s1 = sentence_from_rows({{1.0, -1.0, 1.0, -1.0}, {1.0, 2.0, 3.0, 4.0}});
  const auto s2 = sentence_from_rows({{2.0, 2.0, 2.0, 2.0}, {1.0, -1.0, 1.0, -1.0}});

  const auto single = fa::frequency_profile({s1});
  CHECK(single.avg_nsc[0] == 1.0);
  CHECK(single.avg_nsc[1] == doctest::Approx(1.0 / 3.0));

  const auto both = fa::frequency_profile({s1, s2});
  CHECK(both.avg_nsc[0] == doctest::Approx(0.5));
  CHECK(both.avg_nsc[1] == doctest::Approx((1.0 / 3.0 + 1.0) / 2.0));

  // Sentence order does not matter.
  const auto swapped = fa::frequency_profile({s2, s1});
  CHECK(both.avg_nsc == swapped.avg_nsc);
  CHECK(both.sorted_order == swapped.sorted_order);
}

TEST_CASE("frequency profile skips single-token sentences") {
  const auto good = sentence_from_rows({{1.0, -1.0}});
  const auto lonely = sentence_from_rows({{3.0}});
  const auto p = fa::frequency_profile({lonely, good});
  CHECK(p.avg_nsc[0] == 1.0);
  CHECK_THROWS_AS(fa::frequency_profile({lonely}), Error);
  CHECK_THROWS_AS(fa::frequency_profile({}), Error);
}

TEST_CASE("sorted order uses original index to break ties") {
  const auto p = profile_from_values({0.5, 0.2, 0.5, 0.1});
  CHECK(p.sorted_order == std::vector<std::uint32_t>{3, 1, 0, 2});
}

TEST_CASE("manual band cuts") {
  // 300 dimensions with distinct synthetic NSC values.
  std::vector<double> values(300);
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = static_cast<double>((i * 7919) % 300) / 300.0;
  }
  const auto profile = profile_from_values(values);
  const auto bands = fa::partition_bands(profile, fa::BandMethod::manual(5, 260));
  CHECK(bands.low.size() == 5);
  CHECK(bands.mid.size() == 255);
  CHECK(bands.high.size() == 40);

  // Partition, and contiguous in sorted order.
  std::vector<bool> seen(300, false);
  for (auto v : bands.low) seen[v] = true;
  for (auto v : bands.mid) seen[v] = true;
  for (auto v : bands.high) seen[v] = true;
  CHECK(std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }));
  double low_max = -1.0, mid_min = 2.0, mid_max = -1.0, high_min = 2.0;
  for (auto v : bands.low) low_max = std::max(low_max, profile.avg_nsc[v]);
  for (auto v : bands.mid) {
    mid_min = std::min(mid_min, profile.avg_nsc[v]);
    mid_max = std::max(mid_max, profile.avg_nsc[v]);
  }
  for (auto v : bands.high) high_min = std::min(high_min, profile.avg_nsc[v]);
  CHECK(low_max <= mid_min);
  CHECK(mid_max <= high_min);

  CHECK_THROWS_AS(fa::partition_bands(profile, fa::BandMethod::manual(10, 5)), Error);
  CHECK_THROWS_AS(fa::partition_bands(profile, fa::BandMethod::manual(0, 301)), Error);
}

TEST_CASE("manual cuts may leave bands empty") {
  const auto profile = profile_from_values({0.1, 0.2, 0.3, 0.4});
  const auto bands = fa::partition_bands(profile, fa::BandMethod::manual(0, 4));
  CHECK(bands.low.empty());
  CHECK(bands.mid.size() == 4);
  CHECK(bands.high.empty());
}

TEST_CASE("auto elbow on a step curve cuts at the step") {
  // 20 zeros then 44 ones. The chord runs (0,0)..(63,1), so distances are
  // proportional to |i - 63*y_i|: the left-half maximum sits at the first
  // one (|20 - 63| = 43 beats the last zero's 19).
  std::vector<double> values(64, 1.0);
  for (std::size_t i = 0; i < 20; ++i) values[i] = 0.0;
  const auto profile = profile_from_values(values);
  const auto bands = fa::partition_bands(profile, fa::BandMethod::auto_elbow());

  // Oracle: max chord distance scanned over each half.
  std::vector<double> sorted_curve(64);
  for (std::size_t i = 0; i < 64; ++i) {
    sorted_curve[i] = profile.avg_nsc[profile.sorted_order[i]];
  }
  const auto dist = chord_distances(sorted_curve);
  std::size_t c1 = 0;
  for (std::size_t i = 1; i <= 31; ++i) {
    if (dist[i] > dist[c1]) c1 = i;
  }
  CHECK(c1 == 20);
  CHECK(bands.cut_low == c1 + 1);
  CHECK(bands.low.size() == 21);

  std::size_t c2 = 32;
  for (std::size_t i = 33; i < 64; ++i) {
    if (dist[i] > dist[c2]) c2 = i;
  }
  CHECK(bands.cut_high == c2 + 1);
}

TEST_CASE("flat profile degenerates to all-mid") {
  std::vector<std::string> warnings;
  const auto profile = profile_from_values(std::vector<double>(16, 0.25));
  const auto bands =
      fa::partition_bands(profile, fa::BandMethod::auto_elbow(), &warnings);
  CHECK(bands.low.empty());
  CHECK(bands.high.empty());
  CHECK(bands.mid.size() == 16);
  CHECK(!warnings.empty());
}
