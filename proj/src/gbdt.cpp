#include "gwpt/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace gwpt::gbdt {

double Tree::predict(std::span<const double> x) const {
  std::size_t node = 0;
  while (!nodes[node].is_leaf()) {
    const TreeNode& nd = nodes[node];
    node = static_cast<std::size_t>(
        x[static_cast<std::size_t>(nd.feature)] < nd.threshold ? nd.left : nd.right);
  }
  return nodes[node].value;
}

std::size_t Tree::leaf_count() const {
  std::size_t c = 0;
  for (const TreeNode& nd : nodes) c += nd.is_leaf();
  return c;
}

std::size_t Tree::internal_count() const {
  return nodes.size() - leaf_count();
}

int Tree::max_depth() const {
  // Iterative DFS; nodes form a proper binary tree rooted at 0.
  int best = 0;
  std::vector<std::pair<std::int32_t, int>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [id, depth] = stack.back();
    stack.pop_back();
    const TreeNode& nd = nodes[static_cast<std::size_t>(id)];
    if (nd.is_leaf()) {
      best = std::max(best, depth);
    } else {
      stack.emplace_back(nd.left, depth + 1);
      stack.emplace_back(nd.right, depth + 1);
    }
  }
  return best;
}

std::vector<double> GbdtModel::scores(std::span<const double> x) const {
  if (x.size() != feature_dim) {
    throw Error::bad_input("predict: feature vector length " +
                           std::to_string(x.size()) + " does not match model dimension " +
                           std::to_string(feature_dim));
  }
  std::vector<double> out(static_cast<std::size_t>(n_classes), 0.0);
  for (int c = 0; c < n_classes; ++c) {
    double sum = 0.0;
    for (const Tree& tree : forests[static_cast<std::size_t>(c)]) {
      sum += tree.predict(x);
    }
    out[static_cast<std::size_t>(c)] = base_score + learning_rate * sum;
  }
  return out;
}

int GbdtModel::predict(std::span<const double> x) const {
  const std::vector<double> s = scores(x);
  int best = 0;
  for (int c = 1; c < n_classes; ++c) {
    if (s[static_cast<std::size_t>(c)] > s[static_cast<std::size_t>(best)]) best = c;
  }
  return best;
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double logloss(double score, double target) {
  const double p = std::clamp(sigmoid(score), 1e-15, 1.0 - 1e-15);
  return -(target * std::log(p) + (1.0 - target) * std::log(1.0 - p));
}

// Scan state of one active node while sweeping one feature column.
struct ScanState {
  double grad_left = 0.0;
  double hess_left = 0.0;
  std::size_t n_left = 0;
  double prev_value = 0.0;
  bool started = false;
};

// One node of the level-synchronous builder.
struct BuildNode {
  double grad_sum = 0.0;
  double hess_sum = 0.0;
  std::size_t count = 0;
  double parent_term = 0.0;
  // Best split so far (features scanned ascending, values ascending, so
  // ties keep the first candidate).
  double best_gain = -1.0;
  std::int32_t best_feature = -1;
  double best_threshold = 0.0;
  std::int32_t tree_node = -1;
};

class TreeBuilder {
 public:
  TreeBuilder(const std::vector<std::vector<double>>& columns,
              const std::vector<std::vector<std::uint32_t>>& sorted,
              const BoostParams& params)
      : columns_(columns), sorted_(sorted), params_(params) {}

  // Builds one tree on (grad, hess) and applies learning_rate * leaf value
  // to scores via leaf assignments.
  Tree build(std::span<const double> grad, std::span<const double> hess,
             std::span<double> scores) {
    const std::size_t n = grad.size();
    Tree tree;
    tree.nodes.push_back(TreeNode{});

    std::vector<std::int32_t> slot_of(n, 0);
    std::vector<BuildNode> level(1);
    level[0].tree_node = 0;
    level[0].count = n;
    for (std::size_t i = 0; i < n; ++i) {
      level[0].grad_sum += grad[i];
      level[0].hess_sum += hess[i];
    }
    finish_parent_term(level[0]);

    for (int depth = 0; depth < params_.max_depth && !level.empty(); ++depth) {
      scan_splits(level, slot_of, grad, hess);

      std::vector<BuildNode> next;
      std::vector<std::int32_t> remap(level.size() * 2, -1);
      for (std::size_t a = 0; a < level.size(); ++a) {
        BuildNode& node = level[a];
        const bool split = node.best_feature >= 0 &&
                           node.best_gain >= params_.min_gain &&
                           node.best_gain > 0.0;
        TreeNode& tn = tree.nodes[static_cast<std::size_t>(node.tree_node)];
        if (!split) {
          tn.value = leaf_value(node);
          remap[a * 2] = remap[a * 2 + 1] = -1;
          continue;
        }
        tn.feature = node.best_feature;
        tn.threshold = node.best_threshold;
        tn.left = static_cast<std::int32_t>(tree.nodes.size());
        tn.right = tn.left + 1;
        tree.nodes.push_back(TreeNode{});
        tree.nodes.push_back(TreeNode{});

        BuildNode left, right;
        left.tree_node = tn.left;
        right.tree_node = tn.right;
        remap[a * 2] = static_cast<std::int32_t>(next.size());
        remap[a * 2 + 1] = static_cast<std::int32_t>(next.size() + 1);
        next.push_back(left);
        next.push_back(right);
      }

      // Route samples and accumulate child statistics.
      for (std::size_t i = 0; i < n; ++i) {
        const std::int32_t a = slot_of[i];
        if (a < 0) continue;
        const BuildNode& node = level[static_cast<std::size_t>(a)];
        if (remap[static_cast<std::size_t>(a) * 2] < 0) {
          // Node became a leaf; settle the sample.
          apply_leaf(tree, node, scores, i);
          slot_of[i] = -1;
          continue;
        }
        const TreeNode& tn = tree.nodes[static_cast<std::size_t>(node.tree_node)];
        const bool go_left =
            columns_[static_cast<std::size_t>(tn.feature)][i] < tn.threshold;
        const std::int32_t child =
            remap[static_cast<std::size_t>(a) * 2 + (go_left ? 0 : 1)];
        slot_of[i] = child;
        BuildNode& cn = next[static_cast<std::size_t>(child)];
        cn.grad_sum += grad[i];
        cn.hess_sum += hess[i];
        ++cn.count;
      }
      for (BuildNode& node : next) finish_parent_term(node);
      level = std::move(next);
    }

    // Depth limit reached: everything still active becomes a leaf.
    for (BuildNode& node : level) {
      tree.nodes[static_cast<std::size_t>(node.tree_node)].value = leaf_value(node);
    }
    for (std::size_t i = 0; i < slot_of.size(); ++i) {
      if (slot_of[i] >= 0) {
        apply_leaf(tree, level[static_cast<std::size_t>(slot_of[i])], scores, i);
      }
    }
    return tree;
  }

 private:
  void finish_parent_term(BuildNode& node) const {
    const double denom = node.hess_sum + params_.l2_reg;
    node.parent_term = denom > 0.0 ? node.grad_sum * node.grad_sum / denom : 0.0;
  }

  double leaf_value(const BuildNode& node) const {
    const double denom = node.hess_sum + params_.l2_reg;
    return denom > 0.0 ? -node.grad_sum / denom : 0.0;
  }

  void apply_leaf(const Tree& tree, const BuildNode& node,
                  std::span<double> scores, std::size_t i) const {
    scores[i] += params_.learning_rate *
                 tree.nodes[static_cast<std::size_t>(node.tree_node)].value;
  }

  // Sweeps every feature once in globally sorted order; per-node prefixes
  // come out in that node's sorted order, so candidate thresholds are the
  // midpoints between consecutive distinct member values.
  void scan_splits(std::vector<BuildNode>& level,
                   const std::vector<std::int32_t>& slot_of,
                   std::span<const double> grad, std::span<const double> hess) {
    std::vector<ScanState> scan(level.size());
    for (std::size_t j = 0; j < columns_.size(); ++j) {
      std::fill(scan.begin(), scan.end(), ScanState{});
      const std::vector<double>& col = columns_[j];
      for (const std::uint32_t i : sorted_[j]) {
        const std::int32_t a = slot_of[i];
        if (a < 0) continue;
        BuildNode& node = level[static_cast<std::size_t>(a)];
        ScanState& st = scan[static_cast<std::size_t>(a)];
        const double v = col[i];
        if (st.started && v > st.prev_value && st.n_left > 0 &&
            st.n_left < node.count) {
          const double gl = st.grad_left;
          const double hl = st.hess_left;
          const double gr = node.grad_sum - gl;
          const double hr = node.hess_sum - hl;
          const double dl = hl + params_.l2_reg;
          const double dr = hr + params_.l2_reg;
          if (dl > 0.0 && dr > 0.0) {
            const double gain =
                0.5 * (gl * gl / dl + gr * gr / dr - node.parent_term);
            if (gain > node.best_gain) {
              node.best_gain = gain;
              node.best_feature = static_cast<std::int32_t>(j);
              node.best_threshold = 0.5 * (st.prev_value + v);
            }
          }
        }
        st.grad_left += grad[i];
        st.hess_left += hess[i];
        ++st.n_left;
        st.prev_value = v;
        st.started = true;
      }
    }
  }

  const std::vector<std::vector<double>>& columns_;
  const std::vector<std::vector<std::uint32_t>>& sorted_;
  const BoostParams& params_;
};

double penalty_of(const Tree& tree, double l2_reg, double lr) {
  double sum = 0.0;
  for (const TreeNode& nd : tree.nodes) {
    if (nd.is_leaf()) {
      const double w = lr * nd.value;
      sum += w * w;
    }
  }
  return 0.5 * l2_reg * sum;
}

}  // namespace

GbdtModel fit(const Matrix& features, std::span<const int> labels, int n_classes,
              const BoostParams& params, const Matrix* val_features,
              std::span<const int> val_labels, FitTrace* trace) {
  const std::size_t n = features.rows;
  const std::size_t d = features.cols;
  if (n < 2) throw Error::bad_input("gbdt: needs at least 2 training samples");
  if (d < 1) throw Error::bad_input("gbdt: needs at least 1 feature");
  if (n_classes < 2) throw Error::bad_input("gbdt: needs at least 2 classes");
  if (labels.size() != n) throw Error::bad_input("gbdt: features/labels length mismatch");
  if (params.max_depth < 1) throw Error::bad_input("gbdt: max_depth must be >= 1");
  if (params.n_trees_per_class < 1) {
    throw Error::bad_input("gbdt: n_trees_per_class must be >= 1");
  }
  if (params.early_stop_patience < 1) {
    throw Error::bad_input("gbdt: early_stop_patience must be >= 1");
  }
  for (std::size_t i = 0; i < features.data.size(); ++i) {
    if (!std::isfinite(features.data[i])) {
      throw Error::bad_input("gbdt: non-finite feature value at row " +
                             std::to_string(i / d) + ", column " +
                             std::to_string(i % d));
    }
  }
  for (int y : labels) {
    if (y < 0 || y >= n_classes) {
      throw Error::bad_input("gbdt: label " + std::to_string(y) + " outside 0.." +
                             std::to_string(n_classes - 1));
    }
  }
  const bool has_val = val_features != nullptr;
  if (has_val) {
    if (val_features->cols != d) {
      throw Error::bad_input("gbdt: validation feature dimension mismatch");
    }
    if (val_labels.size() != val_features->rows) {
      throw Error::bad_input("gbdt: validation features/labels length mismatch");
    }
  }

  GbdtModel model;
  model.n_classes = n_classes;
  model.feature_dim = d;
  model.learning_rate = params.learning_rate;
  model.base_score = 0.0;
  model.forests.resize(static_cast<std::size_t>(n_classes));

  // Column-major copy plus one argsort per feature, shared by all trees.
  std::vector<std::vector<double>> columns(d, std::vector<double>(n));
  std::vector<std::vector<std::uint32_t>> sorted(d);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < n; ++i) columns[j][i] = features.at(i, j);
    sorted[j].resize(n);
    std::iota(sorted[j].begin(), sorted[j].end(), 0u);
    std::stable_sort(sorted[j].begin(), sorted[j].end(),
                     [&](std::uint32_t a, std::uint32_t b) {
                       return columns[j][a] < columns[j][b];
                     });
  }

  std::vector<std::vector<double>> scores(
      static_cast<std::size_t>(n_classes),
      std::vector<double>(n, model.base_score));
  std::vector<std::vector<double>> val_scores;
  if (has_val) {
    val_scores.assign(static_cast<std::size_t>(n_classes),
                      std::vector<double>(val_features->rows, model.base_score));
  }
  std::vector<double> grad(n), hess(n);
  std::vector<double> penalty(static_cast<std::size_t>(n_classes), 0.0);
  if (trace) {
    trace->objective.assign(static_cast<std::size_t>(n_classes), {});
    trace->val_error.clear();
    trace->best_round = -1;
  }

  TreeBuilder builder(columns, sorted, params);
  int best_round = -1;
  double best_error = std::numeric_limits<double>::infinity();

  for (int round = 0; round < params.n_trees_per_class; ++round) {
    for (int c = 0; c < n_classes; ++c) {
      const auto ci = static_cast<std::size_t>(c);
      for (std::size_t i = 0; i < n; ++i) {
        const double p = sigmoid(scores[ci][i]);
        const double target = labels[i] == c ? 1.0 : 0.0;
        grad[i] = p - target;
        hess[i] = p * (1.0 - p);
      }
      Tree tree = builder.build(grad, hess, scores[ci]);
      if (has_val) {
        std::vector<double>& vs = val_scores[ci];
        for (std::size_t i = 0; i < val_features->rows; ++i) {
          vs[i] += params.learning_rate * tree.predict(val_features->row(i));
        }
      }
      penalty[ci] += penalty_of(tree, params.l2_reg, params.learning_rate);
      model.forests[ci].push_back(std::move(tree));
      if (trace) {
        double loss = penalty[ci];
        for (std::size_t i = 0; i < n; ++i) {
          loss += logloss(scores[ci][i], labels[i] == c ? 1.0 : 0.0);
        }
        trace->objective[ci].push_back(loss);
      }
    }

    if (has_val) {
      std::size_t wrong = 0;
      for (std::size_t i = 0; i < val_features->rows; ++i) {
        int arg = 0;
        for (int c = 1; c < n_classes; ++c) {
          if (val_scores[static_cast<std::size_t>(c)][i] >
              val_scores[static_cast<std::size_t>(arg)][i]) {
            arg = c;
          }
        }
        wrong += (arg != val_labels[i]);
      }
      const double err = val_features->rows == 0
                             ? 0.0
                             : static_cast<double>(wrong) /
                                   static_cast<double>(val_features->rows);
      if (trace) trace->val_error.push_back(err);
      if (err < best_error) {
        best_error = err;
        best_round = round;
      }
      if (round - best_round >= params.early_stop_patience) break;
    }
  }

  if (has_val && best_round >= 0) {
    const std::size_t keep = static_cast<std::size_t>(best_round) + 1;
    for (auto& forest : model.forests) {
      if (forest.size() > keep) forest.resize(keep);
    }
  }
  if (trace) trace->best_round = best_round;
  return model;
}

std::int64_t count_params(const GbdtModel& model) {
  std::int64_t total = 0;
  for (const auto& forest : model.forests) {
    for (const Tree& tree : forest) {
      total += 2 * static_cast<std::int64_t>(tree.internal_count()) +
               static_cast<std::int64_t>(tree.leaf_count());
    }
  }
  return total;
}

std::int64_t full_tree_params(int depth) {
  const std::int64_t leaves = std::int64_t{1} << depth;
  return 2 * (leaves - 1) + leaves;
}

std::int64_t count_flops(std::int64_t trees_per_class, int depth, int n_classes) {
  return (trees_per_class * depth + trees_per_class) * n_classes;
}

std::int64_t count_flops(const GbdtModel& model) {
  std::int64_t total = 0;
  for (const auto& forest : model.forests) {
    for (const Tree& tree : forest) {
      total += tree.max_depth() + 1;
    }
  }
  return total;
}

}  // namespace gwpt::gbdt
