#include "gwpt/dft_select.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include <doctest.h>

using namespace gwpt;
namespace dft = gwpt::dft_select;

namespace {

double entropy_bits(const std::vector<int>& labels, int n_classes) {
  std::vector<std::size_t> counts(static_cast<std::size_t>(n_classes), 0);
  for (int y : labels) ++counts[static_cast<std::size_t>(y)];
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(labels.size());
    h -= p * std::log2(p);
  }
  return h;
}

// Exhaustive-midpoint oracle: every split between consecutive distinct
// values, weighted entropy of the two sides, minimum wins.
double brute_force_loss(std::vector<double> values, std::vector<int> labels,
                        int n_classes) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  double best = std::numeric_limits<double>::infinity();
  for (std::size_t cut = 1; cut < n; ++cut) {
    if (values[order[cut - 1]] == values[order[cut]]) continue;
    std::vector<int> left, right;
    for (std::size_t i = 0; i < n; ++i) {
      ((i < cut) ? left : right).push_back(labels[order[i]]);
    }
    const double loss =
        (static_cast<double>(left.size()) / static_cast<double>(n)) *
            entropy_bits(left, n_classes) +
        (static_cast<double>(right.size()) / static_cast<double>(n)) *
            entropy_bits(right, n_classes);
    best = std::min(best, loss);
  }
  if (!std::isfinite(best)) {
    return entropy_bits(labels, n_classes);  // constant feature
  }
  return best;
}

}  // namespace

TEST_CASE("separable values split with zero loss") {
  std::vector<double> values{0.0, 0.1, 0.9, 1.0};
  std::vector<int> labels{0, 0, 1, 1};
  const auto r = dft::dft_loss_1d(values, labels, 2, 31);
  CHECK(r.loss == 0.0);
  CHECK(r.discriminant);
  CHECK(r.threshold > 0.1);
  CHECK(r.threshold <= 0.9);
}

TEST_CASE("uniform labels have zero loss everywhere") {
  std::vector<double> values{0.0, 0.5, 1.0, 2.0};
  std::vector<int> labels{1, 1, 1, 1};
  CHECK(dft::dft_loss_1d(values, labels, 2, 31).loss == 0.0);
}

TEST_CASE("interleaved labels match the brute-force oracle") {
  std::vector<double> values{0.0, 1.0, 2.0, 3.0};
  std::vector<int> labels{0, 1, 0, 1};
  const auto r = dft::dft_loss_1d(values, labels, 2, 31);
  CHECK(r.loss == doctest::Approx(brute_force_loss(values, labels, 2)).epsilon(1e-12));
}

TEST_CASE("constant features are flagged with the full label entropy") {
  std::vector<double> values{2.0, 2.0, 2.0};
  std::vector<int> labels{0, 1, 0};
  const auto r = dft::dft_loss_1d(values, labels, 2, 31);
  CHECK(!r.discriminant);
  CHECK(r.threshold == 2.0);
  CHECK(r.loss == doctest::Approx(entropy_bits(labels, 2)));
}

TEST_CASE("grid losses equal the oracle on grid-reachable values") {
  // Values drawn from the grid lattice itself (endpoints always included)
  // so every distinct-value boundary is reachable by some grid threshold.
  std::mt19937_64 rng(67);
  const int n_grid = 15;
  for (int trial = 0; trial < 60; ++trial) {
    std::uniform_int_distribution<int> count(4, 40);
    std::uniform_int_distribution<int> lattice(0, n_grid + 1);
    std::uniform_int_distribution<int> cls(0, 2);
    const int n = count(rng);
    std::vector<double> values(static_cast<std::size_t>(n));
    std::vector<int> labels(static_cast<std::size_t>(n));
    values[0] = 0.0;
    values[1] = 1.0;
    for (int i = 2; i < n; ++i) {
      values[static_cast<std::size_t>(i)] =
          static_cast<double>(lattice(rng)) / static_cast<double>(n_grid + 1);
    }
    for (int i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = cls(rng);
    const auto r = dft::dft_loss_1d(values, labels, 3, n_grid);
    const double oracle = brute_force_loss(values, labels, 3);
    CHECK(std::abs(r.loss - oracle) < 1e-12);
    CHECK(r.loss <= entropy_bits(labels, 3) + 1e-12);
  }
}

TEST_CASE("losses are invariant under increasing affine maps and permutations") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> values(25);
    std::vector<int> labels(25);
    std::uniform_int_distribution<int> cls(0, 3);
    for (std::size_t i = 0; i < values.size(); ++i) {
      values[i] = value(rng);
      labels[i] = cls(rng);
    }
    const double base = dft::dft_loss_1d(values, labels, 4, 31).loss;

    std::vector<double> mapped(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) mapped[i] = 2.5 * values[i] - 7.0;
    CHECK(std::abs(dft::dft_loss_1d(mapped, labels, 4, 31).loss - base) < 1e-12);

    std::vector<std::size_t> perm(values.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> pv(values.size());
    std::vector<int> pl(values.size());
    for (std::size_t i = 0; i < perm.size(); ++i) {
      pv[i] = values[perm[i]];
      pl[i] = labels[perm[i]];
    }
    CHECK(dft::dft_loss_1d(pv, pl, 4, 31).loss == base);
  }
}

TEST_CASE("ranking prefers separable features and breaks ties by index") {
  std::mt19937_64 rng(73);
  Matrix features(40, 3);
  std::vector<int> labels(40);
  std::uniform_real_distribution<double> noise(0.0, 1.0);
  for (std::size_t i = 0; i < 40; ++i) {
    labels[i] = i < 20 ? 0 : 1;
    features.at(i, 0) = labels[i] == 0 ? noise(rng) * 0.4 : 0.6 + noise(rng) * 0.4;
    features.at(i, 1) = noise(rng);  // uninformative
    features.at(i, 2) = features.at(i, 0);  // duplicate of column 0
  }
  const auto ranking = dft::rank_features(features, labels, 2, 31);
  CHECK(ranking.loss[0] < ranking.loss[1]);
  CHECK(ranking.loss[0] == ranking.loss[2]);
  CHECK(ranking.order[0] == 0);  // tie with column 2 resolves to lower index
  CHECK(ranking.order[1] == 2);

  const auto top2 = dft::select_top_k(ranking, 2);
  CHECK(top2 == std::vector<std::uint32_t>{0, 2});
  const auto all = dft::select_top_k(ranking, 3);
  CHECK(all == std::vector<std::uint32_t>{0, 1, 2});
  CHECK_THROWS_AS(dft::select_top_k(ranking, 0), Error);
  CHECK_THROWS_AS(dft::select_top_k(ranking, 4), Error);
}

TEST_CASE("single-column ranking") {
  Matrix features(4, 1);
  features.at(0, 0) = 0.0;
  features.at(1, 0) = 1.0;
  features.at(2, 0) = 2.0;
  features.at(3, 0) = 3.0;
  std::vector<int> labels{0, 0, 1, 1};
  const auto ranking = dft::rank_features(features, labels, 2, 31);
  CHECK(ranking.order == std::vector<std::uint32_t>{0});
}

TEST_CASE("balanced subsample caps per class deterministically") {
  std::vector<int> labels;
  for (int i = 0; i < 90; ++i) labels.push_back(0);
  for (int i = 0; i < 10; ++i) labels.push_back(1);

  const auto all = dft::balanced_subsample(labels, 2, 200, 9);
  CHECK(all.size() == labels.size());

  const auto sub = dft::balanced_subsample(labels, 2, 40, 9);
  CHECK(sub.size() == 30);  // 20 of class 0 plus all 10 of class 1
  CHECK(std::is_sorted(sub.begin(), sub.end()));
  std::size_t class1 = 0;
  for (std::size_t idx : sub) class1 += labels[idx] == 1;
  CHECK(class1 == 10);

  const auto again = dft::balanced_subsample(labels, 2, 40, 9);
  CHECK(sub == again);
  const auto other_seed = dft::balanced_subsample(labels, 2, 40, 10);
  CHECK(sub != other_seed);
}
