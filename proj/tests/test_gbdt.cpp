#include "gwpt/gbdt.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include <doctest.h>

using namespace gwpt;
namespace gb = gwpt::gbdt;

namespace {

// 4 clusters in 2-D, XOR labeling.
std::pair<Matrix, std::vector<int>> xor_dataset(std::mt19937_64& rng, std::size_t per_cluster) {
  std::uniform_real_distribution<double> jitter(-0.2, 0.2);
  Matrix x(per_cluster * 4, 2);
  std::vector<int> y(per_cluster * 4);
  std::size_t row = 0;
  for (int cx = 0; cx < 2; ++cx) {
    for (int cy = 0; cy < 2; ++cy) {
      for (std::size_t i = 0; i < per_cluster; ++i, ++row) {
        x.at(row, 0) = cx + jitter(rng);
        x.at(row, 1) = cy + jitter(rng);
        y[row] = cx ^ cy;
      }
    }
  }
  return {std::move(x), std::move(y)};
}

std::size_t train_errors(const gb::GbdtModel& model, const Matrix& x,
                         const std::vector<int>& y) {
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < x.rows; ++i) wrong += model.predict(x.row(i)) != y[i];
  return wrong;
}

}  // namespace

TEST_CASE("degenerate single-class training data predicts that class") {
  Matrix x(6, 2);
  std::vector<int> y(6, 1);  // class space is {0, 1} but only 1 occurs
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> v(-1.0, 1.0);
  for (double& e : x.data) e = v(rng);
  gb::BoostParams params;
  params.n_trees_per_class = 10;
  const auto model = gb::fit(x, y, 2, params);
  for (std::size_t i = 0; i < x.rows; ++i) {
    CHECK(model.predict(x.row(i)) == 1);
  }
}

TEST_CASE("xor clusters reach perfect training accuracy") {
  std::mt19937_64 rng(7);
  auto [x, y] = xor_dataset(rng, 12);
  gb::BoostParams params;
  params.max_depth = 3;
  params.n_trees_per_class = 50;
  params.learning_rate = 0.3;
  const auto model = gb::fit(x, y, 2, params);
  CHECK(train_errors(model, x, y) == 0);
}

TEST_CASE("one stump separates linearly separable data") {
  Matrix x(8, 1);
  std::vector<int> y(8);
  for (std::size_t i = 0; i < 8; ++i) {
    x.at(i, 0) = static_cast<double>(i);
    y[i] = i < 4 ? 0 : 1;
  }
  gb::BoostParams params;
  params.max_depth = 1;
  params.n_trees_per_class = 1;
  params.learning_rate = 1.0;
  const auto model = gb::fit(x, y, 2, params);
  CHECK(train_errors(model, x, y) == 0);
  // The oracle split for this data is between 3 and 4.
  const gb::Tree& stump = model.forests[0][0];
  CHECK(stump.nodes[0].feature == 0);
  CHECK(stump.nodes[0].threshold == doctest::Approx(3.5));
}

TEST_CASE("empty forests fall back to the base score and class 0") {
  gb::GbdtModel model;
  model.n_classes = 3;
  model.feature_dim = 2;
  model.base_score = 0.25;
  model.forests.resize(3);
  std::vector<double> x{1.0, 2.0};
  const auto scores = model.scores(x);
  for (double s : scores) CHECK(s == 0.25);
  CHECK(model.predict(x) == 0);  // tie resolves to the lower class id

  std::vector<double> wrong_size{1.0};
  CHECK_THROWS_AS(model.scores(wrong_size), Error);
}

TEST_CASE("hand-built stump scores add up") {
  gb::GbdtModel model;
  model.n_classes = 2;
  model.feature_dim = 1;
  model.learning_rate = 0.5;
  model.base_score = 0.0;
  gb::Tree stump;
  stump.nodes.push_back(gb::TreeNode{0, 1.0, 1, 2, 0.0});
  stump.nodes.push_back(gb::TreeNode{-1, 0.0, -1, -1, -2.0});
  stump.nodes.push_back(gb::TreeNode{-1, 0.0, -1, -1, 4.0});
  model.forests = {{stump, stump}, {}};

  std::vector<double> left_x{0.5}, right_x{1.5};
  CHECK(model.scores(left_x)[0] == doctest::Approx(0.5 * (-2.0 - 2.0)));
  CHECK(model.scores(right_x)[0] == doctest::Approx(0.5 * (4.0 + 4.0)));
  CHECK(model.predict(right_x) == 0);
  CHECK(model.predict(left_x) == 1);

  // Repeated predictions are identical.
  CHECK(model.scores(left_x) == model.scores(left_x));
}

TEST_CASE("parameter counting") {
  CHECK(gb::full_tree_params(1) == 4);
  CHECK(gb::full_tree_params(3) == 22);
  CHECK(gb::count_flops(5000, 3, 17) == 340000);
  CHECK(gb::count_flops(4000, 3, 17) == 272000);
  CHECK(gb::count_flops(1, 1, 2) == 4);

  // A fitted stump has 1 internal node and 2 leaves.
  Matrix x(4, 1);
  std::vector<int> y{0, 0, 1, 1};
  for (std::size_t i = 0; i < 4; ++i) x.at(i, 0) = static_cast<double>(i);
  gb::BoostParams params;
  params.max_depth = 1;
  params.n_trees_per_class = 2;
  const auto model = gb::fit(x, y, 2, params);
  CHECK(gb::count_params(model) == 2 /*classes*/ * 2 /*trees*/ * 4);
  CHECK(gb::count_flops(model) == 2 * 2 * (1 + 1));
}

TEST_CASE("non-finite features are rejected before training") {
  Matrix x(2, 2);
  x.at(1, 1) = std::nan("");
  std::vector<int> y{0, 1};
  CHECK_THROWS_WITH_AS(gb::fit(x, y, 2, gb::BoostParams{}),
                       doctest::Contains("non-finite"), Error);
}

TEST_CASE("regularized objective never increases across rounds") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    std::uniform_int_distribution<int> n_cls(2, 4);
    const int classes = n_cls(rng);
    Matrix x(80, 4);
    std::vector<int> y(80);
    std::uniform_real_distribution<double> v(-1.0, 1.0);
    std::uniform_int_distribution<int> cls(0, classes - 1);
    for (double& e : x.data) e = v(rng);
    for (int& label : y) label = cls(rng);

    gb::BoostParams params;
    params.n_trees_per_class = 25;
    gb::FitTrace trace;
    gb::fit(x, y, classes, params, nullptr, {}, &trace);
    for (const auto& objective : trace.objective) {
      for (std::size_t r = 1; r < objective.size(); ++r) {
        CHECK(objective[r] <= objective[r - 1] + 1e-9);
      }
    }
  }
}

TEST_CASE("early stopping truncates to the best round") {
  std::mt19937_64 rng(17);
  auto [x, y] = xor_dataset(rng, 10);
  auto [xv, yv] = xor_dataset(rng, 5);
  gb::BoostParams params;
  params.n_trees_per_class = 200;
  params.early_stop_patience = 5;
  params.learning_rate = 0.5;
  gb::FitTrace trace;
  const auto model = gb::fit(x, y, 2, params, &xv, yv, &trace);
  REQUIRE(trace.best_round >= 0);
  CHECK(model.forests[0].size() == static_cast<std::size_t>(trace.best_round) + 1);
  CHECK(model.forests[1].size() == model.forests[0].size());
  CHECK(model.forests[0].size() < 200);
}

TEST_CASE("fit is deterministic") {
  std::mt19937_64 rng(19);
  auto [x, y] = xor_dataset(rng, 8);
  gb::BoostParams params;
  params.n_trees_per_class = 12;
  const auto a = gb::fit(x, y, 2, params);
  const auto b = gb::fit(x, y, 2, params);
  REQUIRE(a.forests.size() == b.forests.size());
  for (std::size_t c = 0; c < a.forests.size(); ++c) {
    REQUIRE(a.forests[c].size() == b.forests[c].size());
    for (std::size_t t = 0; t < a.forests[c].size(); ++t) {
      const auto& ta = a.forests[c][t].nodes;
      const auto& tb = b.forests[c][t].nodes;
      REQUIRE(ta.size() == tb.size());
      for (std::size_t n = 0; n < ta.size(); ++n) {
        CHECK(ta[n].feature == tb[n].feature);
        CHECK(ta[n].threshold == tb[n].threshold);
        CHECK(ta[n].value == tb[n].value);
      }
    }
  }
}
