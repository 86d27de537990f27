#include "gwpt/dft_select.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "gwpt/kernels.hpp"

namespace gwpt::dft_select {

namespace {

// Shannon entropy in bits of a count vector, 0*log0 := 0.
double entropy_bits(const std::vector<std::size_t>& counts, std::size_t total) {
  if (total == 0) return 0.0;
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

void check_labels(std::span<const int> labels, int n_classes) {
  if (n_classes < 1) throw Error::bad_input("dft: n_classes must be positive");
  for (int y : labels) {
    if (y < 0 || y >= n_classes) {
      throw Error::bad_input("dft: label " + std::to_string(y) +
                             " outside 0.." + std::to_string(n_classes - 1));
    }
  }
}

}  // namespace

SplitResult dft_loss_1d(std::span<const double> values,
                        std::span<const int> labels, int n_classes, int n_grid) {
  const std::size_t n = values.size();
  if (n < 2) throw Error::bad_input("dft: needs at least 2 samples");
  if (labels.size() != n) throw Error::bad_input("dft: values/labels length mismatch");
  if (n_grid < 1) throw Error::bad_input("dft: n_grid must be >= 1");
  check_labels(labels, n_classes);

  const kernels::MinMax range = kernels::minmax(values.data(), n);

  std::vector<std::size_t> total_counts(static_cast<std::size_t>(n_classes), 0);
  for (int y : labels) ++total_counts[static_cast<std::size_t>(y)];

  if (range.min == range.max) {
    // Constant feature: no split separates anything.
    return SplitResult{entropy_bits(total_counts, n), range.min, false};
  }

  // Sort once; each grid threshold then becomes a prefix boundary.
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return values[a] < values[b];
  });

  std::vector<std::size_t> left_counts(static_cast<std::size_t>(n_classes), 0);
  std::vector<std::size_t> right_counts = total_counts;

  SplitResult best;
  best.loss = std::numeric_limits<double>::infinity();
  best.threshold = range.min;

  const double span_len = range.max - range.min;
  std::size_t cursor = 0;  // samples consumed into the left side
  for (int g = 1; g <= n_grid; ++g) {
    const double t = range.min + span_len * static_cast<double>(g) /
                                      static_cast<double>(n_grid + 1);
    while (cursor < n && values[order[cursor]] <= t) {
      const auto y = static_cast<std::size_t>(labels[order[cursor]]);
      ++left_counts[y];
      --right_counts[y];
      ++cursor;
    }
    const std::size_t n_left = cursor;
    const std::size_t n_right = n - cursor;
    if (n_left == 0 || n_right == 0) continue;
    const double loss =
        (static_cast<double>(n_left) / static_cast<double>(n)) * entropy_bits(left_counts, n_left) +
        (static_cast<double>(n_right) / static_cast<double>(n)) * entropy_bits(right_counts, n_right);
    if (loss < best.loss) {
      best.loss = loss;
      best.threshold = t;
    }
  }

  if (!std::isfinite(best.loss)) {
    // Every grid point rounded onto an endpoint; treat as non-discriminant.
    return SplitResult{entropy_bits(total_counts, n), range.min, false};
  }
  return best;
}

DftRanking rank_features(const Matrix& features, std::span<const int> labels,
                         int n_classes, int n_grid) {
  if (features.rows < 2) throw Error::bad_input("dft: needs at least 2 samples");
  if (features.cols < 1) throw Error::bad_input("dft: needs at least 1 feature");
  if (labels.size() != features.rows) {
    throw Error::bad_input("dft: features/labels length mismatch");
  }

  DftRanking ranking;
  ranking.loss.resize(features.cols);
  std::vector<double> column(features.rows);
  for (std::size_t j = 0; j < features.cols; ++j) {
    for (std::size_t i = 0; i < features.rows; ++i) column[i] = features.at(i, j);
    ranking.loss[j] = dft_loss_1d(column, labels, n_classes, n_grid).loss;
  }
  ranking.order.resize(features.cols);
  std::iota(ranking.order.begin(), ranking.order.end(), 0u);
  std::stable_sort(ranking.order.begin(), ranking.order.end(),
                   [&](std::uint32_t a, std::uint32_t b) {
                     return ranking.loss[a] < ranking.loss[b];
                   });
  return ranking;
}

std::vector<std::uint32_t> select_top_k(const DftRanking& ranking, std::size_t k) {
  if (k < 1 || k > ranking.order.size()) {
    throw Error::bad_input("dft: k must be in 1.." + std::to_string(ranking.order.size()) +
                           ", got " + std::to_string(k));
  }
  std::vector<std::uint32_t> selected(ranking.order.begin(),
                                      ranking.order.begin() + static_cast<long>(k));
  std::sort(selected.begin(), selected.end());
  return selected;
}

std::vector<std::size_t> balanced_subsample(std::span<const int> labels,
                                            int n_classes, std::size_t max_total,
                                            std::uint64_t seed) {
  check_labels(labels, n_classes);
  std::vector<std::size_t> out;
  if (labels.size() <= max_total) {
    out.resize(labels.size());
    std::iota(out.begin(), out.end(), std::size_t{0});
    return out;
  }

  std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(n_classes));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    by_class[static_cast<std::size_t>(labels[i])].push_back(i);
  }
  const std::size_t cap =
      std::max<std::size_t>(1, max_total / static_cast<std::size_t>(n_classes));
  std::mt19937_64 rng(seed);
  for (auto& group : by_class) {
    std::shuffle(group.begin(), group.end(), rng);
    const std::size_t take = std::min(cap, group.size());
    out.insert(out.end(), group.begin(), group.begin() + static_cast<long>(take));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace gwpt::dft_select
