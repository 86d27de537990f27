#include "gwpt/feature_pipeline.hpp"

#include <cmath>
#include <random>

#include <doctest.h>

#include "gwpt/kernels.hpp"

using namespace gwpt;
namespace fp = gwpt::feature_pipeline;
namespace fa = gwpt::freq_analysis;

namespace {

EmbeddedSentence sentence_from_rows(const std::vector<std::vector<double>>& rows) {
  EmbeddedSentence s(rows.size(), rows[0].size());
  for (std::size_t l = 0; l < rows.size(); ++l) {
    for (std::size_t m = 0; m < rows[l].size(); ++m) s.at(l, m) = rows[l][m];
  }
  return s;
}

fa::BandPartition partition(std::vector<std::uint32_t> low,
                            std::vector<std::uint32_t> mid,
                            std::vector<std::uint32_t> high) {
  fa::BandPartition p;
  p.low = std::move(low);
  p.mid = std::move(mid);
  p.high = std::move(high);
  p.cut_low = static_cast<std::uint32_t>(p.low.size());
  p.cut_high = static_cast<std::uint32_t>(p.low.size() + p.mid.size());
  return p;
}

std::vector<EmbeddedSentence> random_corpus(std::mt19937_64& rng, std::size_t count,
                                            std::size_t dim, std::size_t len) {
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  std::vector<EmbeddedSentence> corpus;
  for (std::size_t i = 0; i < count; ++i) {
    EmbeddedSentence s(dim, len);
    for (std::size_t l = 0; l < dim; ++l) {
      for (std::size_t m = 0; m < len; ++m) s.at(l, m) = value(rng);
    }
    corpus.push_back(std::move(s));
  }
  return corpus;
}

}  // namespace

TEST_CASE("ngram window extraction") {
  // 2 band dims over a 3-token sentence.
  const auto s = sentence_from_rows({{1.0, 2.0, 3.0},
                                     {4.0, 5.0, 6.0},
                                     {7.0, 8.0, 9.0}});
  const std::vector<std::uint32_t> band{0, 2};

  std::vector<double> out(2);
  fp::extract_ngram_block(s, band, 1, 1, out);
  CHECK(out == std::vector<double>{2.0, 8.0});

  // n=2 extends right; at the last token the right position pads with zeros.
  out.resize(4);
  fp::extract_ngram_block(s, band, 2, 2, out);
  CHECK(out == std::vector<double>{3.0, 9.0, 0.0, 0.0});

  // n=3 is centered.
  out.resize(6);
  fp::extract_ngram_block(s, band, 3, 1, out);
  CHECK(out == std::vector<double>{1.0, 7.0, 2.0, 8.0, 3.0, 9.0});

  // Left edge of a centered window pads with zeros.
  fp::extract_ngram_block(s, band, 3, 0, out);
  CHECK(out == std::vector<double>{0.0, 0.0, 1.0, 7.0, 2.0, 8.0});
}

TEST_CASE("pca on rank-1 data keeps one component") {
  Matrix samples(5, 3);
  for (std::size_t i = 0; i < 5; ++i) {
    const double t = static_cast<double>(i) - 2.0;
    samples.at(i, 0) = 1.0 * t;
    samples.at(i, 1) = 2.0 * t;
    samples.at(i, 2) = -1.0 * t;
  }
  const fp::PcaModel model = fp::fit_pca(samples, 0.99);
  CHECK(model.output_dim() == 1);
  CHECK(model.energy_kept == doctest::Approx(1.0));
  // Sign convention: largest-magnitude entry positive.
  CHECK(model.components.at(0, 1) > 0.0);
}

TEST_CASE("pca components are orthonormal and projection is idempotent") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  Matrix samples(60, 5);
  for (double& x : samples.data) x = value(rng);
  const fp::PcaModel model = fp::fit_pca(samples, 0.999999);

  for (std::size_t a = 0; a < model.output_dim(); ++a) {
    for (std::size_t b = 0; b < model.output_dim(); ++b) {
      const double dot = kernels::dot(model.components.row(a).data(),
                                      model.components.row(b).data(), 5);
      CHECK(std::abs(dot - (a == b ? 1.0 : 0.0)) < 1e-8);
    }
  }

  // project -> reconstruct -> project returns the same coordinates.
  std::vector<double> x(5);
  for (double& v : x) v = value(rng);
  std::vector<double> z(model.output_dim()), back(5), z2(model.output_dim());
  model.transform(x, z);
  model.reconstruct(z, back);
  model.transform(back, z2);
  for (std::size_t i = 0; i < z.size(); ++i) {
    CHECK(z[i] == doctest::Approx(z2[i]).epsilon(1e-10));
  }
}

TEST_CASE("pca captured energy meets the threshold") {
  std::mt19937_64 rng(37);
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix samples(400, 6);
  for (std::size_t i = 0; i < samples.rows; ++i) {
    for (std::size_t j = 0; j < samples.cols; ++j) {
      samples.at(i, j) = g(rng) * static_cast<double>(j + 1);
    }
  }
  const fp::PcaModel model = fp::fit_pca(samples, 0.99);
  CHECK(model.energy_kept >= 0.99);
  CHECK(model.output_dim() <= 6);
}

TEST_CASE("pca on an isotropic 2-D gaussian keeps both components") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix samples(500, 2);
  for (double& x : samples.data) x = g(rng);
  const fp::PcaModel model = fp::fit_pca(samples, 0.99);
  CHECK(model.output_dim() == 2);
}

TEST_CASE("pca rejects constant blocks and tiny sample counts") {
  Matrix constant(4, 2);
  for (double& x : constant.data) x = 3.0;
  CHECK_THROWS_WITH_AS(fp::fit_pca(constant, 0.99), doctest::Contains("constant"),
                       Error);
  Matrix one(1, 2);
  CHECK_THROWS_AS(fp::fit_pca(one, 0.99), Error);
}

TEST_CASE("pipeline block composition follows the band orders") {
  std::mt19937_64 rng(43);
  const auto corpus = random_corpus(rng, 30, 6, 5);
  const auto bands = partition({0}, {1, 2, 3}, {4, 5});

  fp::NgramConfig contextual_cfg;
  contextual_cfg.mid_orders = {1};
  contextual_cfg.high_orders = {1, 2};
  const auto contextual = fp::fit_pipeline(corpus, bands, contextual_cfg);
  REQUIRE(contextual.blocks.size() == 3);
  CHECK(contextual.blocks[0].band == fp::Band::Mid);
  CHECK(contextual.blocks[0].order == 1);
  CHECK(!contextual.blocks[0].has_pca);
  CHECK(contextual.blocks[1].band == fp::Band::High);
  CHECK(contextual.blocks[1].order == 1);
  CHECK(!contextual.blocks[1].has_pca);
  CHECK(contextual.blocks[2].order == 2);
  CHECK(contextual.blocks[2].has_pca);

  fp::NgramConfig word_cfg;
  word_cfg.mid_orders = {1, 2};
  word_cfg.high_orders = {1, 2, 3};
  const auto word = fp::fit_pipeline(corpus, bands, word_cfg);
  REQUIRE(word.blocks.size() == 5);
  int pca_blocks = 0;
  for (const auto& b : word.blocks) pca_blocks += b.has_pca;
  CHECK(pca_blocks == 3);  // mid-2, high-2, high-3

  // Block layout covers the output vector exactly.
  std::size_t offset = 0;
  for (const auto& b : word.blocks) {
    CHECK(b.offset == offset);
    offset += b.length;
  }
  CHECK(offset == word.output_dim);
}

TEST_CASE("empty high band leaves a mid-only pipeline") {
  std::mt19937_64 rng(47);
  const auto corpus = random_corpus(rng, 10, 4, 4);
  const auto bands = partition({0}, {1, 2, 3}, {});
  fp::NgramConfig cfg;
  cfg.mid_orders = {1};
  cfg.high_orders = {1, 2};
  const auto pipeline = fp::fit_pipeline(corpus, bands, cfg);
  REQUIRE(pipeline.blocks.size() == 1);
  CHECK(pipeline.output_dim == 3);
}

TEST_CASE("transform output length is constant and low band is ignored") {
  std::mt19937_64 rng(53);
  const auto corpus = random_corpus(rng, 20, 5, 6);
  const auto bands = partition({0, 4}, {1, 2}, {3});
  fp::NgramConfig cfg;
  cfg.mid_orders = {1, 2};
  cfg.high_orders = {1};
  const auto pipeline = fp::fit_pipeline(corpus, bands, cfg);

  for (const auto& s : corpus) {
    const Matrix f = pipeline.transform(s);
    CHECK(f.cols == pipeline.output_dim);
    CHECK(f.rows == s.length());
  }

  // Perturbing low-band dimensions changes nothing, bit for bit.
  EmbeddedSentence tweaked = corpus[0];
  for (std::size_t m = 0; m < tweaked.length(); ++m) {
    tweaked.at(0, m) += 42.0;
    tweaked.at(4, m) -= 17.0;
  }
  const Matrix before = pipeline.transform(corpus[0]);
  const Matrix after = pipeline.transform(tweaked);
  CHECK(before.data == after.data);
}

TEST_CASE("unigram-only pipeline without pca is exact band projection") {
  std::mt19937_64 rng(59);
  const auto corpus = random_corpus(rng, 8, 4, 5);
  const auto bands = partition({}, {1, 3}, {});
  fp::NgramConfig cfg;
  cfg.mid_orders = {1};
  cfg.high_orders = {};
  const auto pipeline = fp::fit_pipeline(corpus, bands, cfg);
  REQUIRE(pipeline.output_dim == 2);
  for (const auto& s : corpus) {
    for (std::size_t m = 0; m < s.length(); ++m) {
      const auto f = pipeline.transform_token(s, m);
      CHECK(f[0] == s.at(1, m));
      CHECK(f[1] == s.at(3, m));
    }
  }
}

TEST_CASE("edge tokens differ from middle tokens only through padding") {
  std::mt19937_64 rng(61);
  auto corpus = random_corpus(rng, 6, 3, 5);
  const auto bands = partition({}, {0, 1, 2}, {});
  fp::NgramConfig cfg;
  cfg.mid_orders = {1};
  cfg.high_orders = {};
  const auto unigram = fp::fit_pipeline(corpus, bands, cfg);

  // Same token value placed mid-sentence and at the edge: unigram features
  // are identical; only order >= 2 windows see the neighbourhood.
  EmbeddedSentence s(3, 4);
  for (std::size_t l = 0; l < 3; ++l) {
    for (std::size_t m = 0; m < 4; ++m) s.at(l, m) = static_cast<double>(l + 1);
  }
  CHECK(unigram.transform_token(s, 0) == unigram.transform_token(s, 2));
}

TEST_CASE("ngram config validation") {
  fp::NgramConfig cfg;
  cfg.mid_orders = {1, 2};
  cfg.high_orders = {2, 2};
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.high_orders = {0};
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.high_orders = {6};
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.high_orders = {1, 3, 5};
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.energy_threshold == 0.99);
}
