#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gwpt/types.hpp"

namespace gwpt::dft_select {

struct SplitResult {
  double loss = 0.0;
  double threshold = 0.0;
  // False for constant features, whose loss is the full label entropy.
  bool discriminant = true;
};

// Minimum over n_grid uniformly spaced thresholds strictly inside
// [min(values), max(values)] of the sample-weighted Shannon entropy (bits)
// of the {v <= t} / {v > t} sides. Ties resolve to the smaller threshold.
SplitResult dft_loss_1d(std::span<const double> values,
                        std::span<const int> labels, int n_classes, int n_grid);

struct DftRanking {
  std::vector<double> loss;           // per feature dimension
  std::vector<std::uint32_t> order;   // ascending loss, ties by index
};

// features: n samples x d dimensions, row-major.
DftRanking rank_features(const Matrix& features, std::span<const int> labels,
                         int n_classes, int n_grid);

// First k of the ranking, returned ascending for stable downstream layout.
std::vector<std::uint32_t> select_top_k(const DftRanking& ranking, std::size_t k);

// Per-class cap of max_total / n_classes samples (at least 1), drawn with a
// seeded shuffle within each class; returns ascending sample indices.
// Identity when n <= max_total.
std::vector<std::size_t> balanced_subsample(std::span<const int> labels,
                                            int n_classes, std::size_t max_total,
                                            std::uint64_t seed);

}  // namespace gwpt::dft_select
