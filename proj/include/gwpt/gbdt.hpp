#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gwpt/types.hpp"

namespace gwpt::gbdt {

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  double value = 0.0;  // leaf score before learning-rate scaling

  bool is_leaf() const { return feature < 0; }
};

// Depth-limited binary regression tree; root at node 0.
// Routing: x[feature] < threshold goes left.
struct Tree {
  std::vector<TreeNode> nodes;

  double predict(std::span<const double> x) const;
  std::size_t leaf_count() const;
  std::size_t internal_count() const;
  int max_depth() const;
};

struct BoostParams {
  int max_depth = 3;
  int n_trees_per_class = 500;
  double learning_rate = 0.1;
  double l2_reg = 1.0;       // lambda on leaf weights
  double min_gain = 0.0;
  int early_stop_patience = 50;
};

// One-vs-rest forests over a fixed class space.
struct GbdtModel {
  int n_classes = 0;
  std::size_t feature_dim = 0;
  double learning_rate = 0.1;
  double base_score = 0.0;
  std::vector<std::vector<Tree>> forests;  // [class][tree]

  // score_c = base_score + learning_rate * sum of tree outputs.
  std::vector<double> scores(std::span<const double> x) const;
  // Argmax class, ties to the lower class id.
  int predict(std::span<const double> x) const;
};

// Per-round diagnostics captured during fit.
struct FitTrace {
  // objective[c][r]: regularized training objective of class c after round r
  // (logistic loss plus l2_reg/2 * sum of applied leaf weights squared).
  std::vector<std::vector<double>> objective;
  std::vector<double> val_error;  // per round, when validation given
  int best_round = -1;
};

// Second-order boosting with exact greedy splits. Labels must lie in
// 0..n_classes-1. With a validation set, training stops once the
// validation error has not improved for early_stop_patience rounds and
// forests are truncated to the best round.
GbdtModel fit(const Matrix& features, std::span<const int> labels, int n_classes,
              const BoostParams& params, const Matrix* val_features = nullptr,
              std::span<const int> val_labels = {}, FitTrace* trace = nullptr);

// 2 per internal node (feature id + threshold) plus 1 per leaf.
std::int64_t count_params(const GbdtModel& model);
// Parameters of a complete depth-D tree: 2*(2^D - 1) + 2^D.
std::int64_t full_tree_params(int depth);
// Reported inference cost: (trees * depth + trees) * classes.
std::int64_t count_flops(std::int64_t trees_per_class, int depth, int n_classes);
// Same rule applied to the stored trees' actual depths.
std::int64_t count_flops(const GbdtModel& model);

}  // namespace gwpt::gbdt
