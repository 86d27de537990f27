#include "gwpt/feature_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "gwpt/kernels.hpp"

namespace gwpt::feature_pipeline {

void NgramConfig::validate() const {
  auto check = [](const std::vector<int>& orders, const char* band) {
    int prev = 0;
    for (int n : orders) {
      if (n < 1 || n > 5) {
        throw Error::bad_input(std::string("ngram config: ") + band +
                               " order must be in 1..5, got " + std::to_string(n));
      }
      if (n <= prev) {
        throw Error::bad_input(std::string("ngram config: ") + band +
                               " orders must be strictly increasing");
      }
      prev = n;
    }
  };
  check(mid_orders, "mid");
  check(high_orders, "high");
  if (energy_threshold <= 0.0 || energy_threshold > 1.0) {
    throw Error::bad_input("ngram config: energy threshold must be in (0, 1]");
  }
}

void extract_ngram_block(const EmbeddedSentence& sentence,
                         std::span<const std::uint32_t> band, int order,
                         std::size_t m, std::span<double> out) {
  const std::size_t len = sentence.length();
  const int first = -((order - 1) / 2);
  std::size_t w = 0;
  for (int o = first; o < first + order; ++o) {
    const long pos = static_cast<long>(m) + o;
    if (pos < 0 || pos >= static_cast<long>(len)) {
      for (std::size_t b = 0; b < band.size(); ++b) out[w++] = 0.0;
    } else {
      for (std::uint32_t l : band) {
        out[w++] = sentence.at(l, static_cast<std::size_t>(pos));
      }
    }
  }
}

PcaModel fit_pca(const Matrix& samples, double energy_threshold) {
  const std::size_t n = samples.rows;
  const std::size_t d = samples.cols;
  if (n < 2) throw Error::bad_input("pca: needs at least 2 samples");
  if (energy_threshold <= 0.0 || energy_threshold > 1.0) {
    throw Error::bad_input("pca: energy threshold must be in (0, 1]");
  }

  PcaModel model;
  model.mean.assign(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    kernels::axpy(1.0, samples.row(i).data(), model.mean.data(), d);
  }
  for (double& x : model.mean) x /= static_cast<double>(n);

  // Streaming upper-triangle accumulation of sum x x^T on centered rows.
  std::vector<double> cov(d * d, 0.0);
  std::vector<double> centered(d);
  for (std::size_t i = 0; i < n; ++i) {
    std::span<const double> row = samples.row(i);
    for (std::size_t j = 0; j < d; ++j) centered[j] = row[j] - model.mean[j];
    for (std::size_t j = 0; j < d; ++j) {
      kernels::axpy(centered[j], centered.data() + j, cov.data() + j * d + j,
                    d - j);
    }
  }
  const double denom = static_cast<double>(n - 1);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = r; c < d; ++c) {
      cov[r * d + c] /= denom;
      cov[c * d + r] = cov[r * d + c];
    }
  }

  Eigen::Map<const Eigen::MatrixXd> cov_map(cov.data(), static_cast<Eigen::Index>(d),
                                            static_cast<Eigen::Index>(d));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov_map);
  if (solver.info() != Eigen::Success) {
    throw Error::internal("pca: eigendecomposition failed");
  }

  // Eigen returns ascending eigenvalues; walk them from the top.
  std::vector<double> eigenvalues(d);
  double total = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    eigenvalues[i] = std::max(0.0, solver.eigenvalues()(static_cast<Eigen::Index>(d - 1 - i)));
    total += eigenvalues[i];
  }
  if (total <= 0.0) throw Error::bad_input("pca: constant block (zero total variance)");

  std::size_t k = 0;
  double kept = 0.0;
  while (k < d && kept / total < energy_threshold) {
    kept += eigenvalues[k];
    ++k;
  }

  model.components = Matrix(k, d);
  for (std::size_t c = 0; c < k; ++c) {
    const Eigen::Index col = static_cast<Eigen::Index>(d - 1 - c);
    std::span<double> dst = model.components.row(c);
    for (std::size_t j = 0; j < d; ++j) {
      dst[j] = solver.eigenvectors()(static_cast<Eigen::Index>(j), col);
    }
    // Deterministic sign: largest-magnitude entry positive, first on ties.
    std::size_t arg = 0;
    for (std::size_t j = 1; j < d; ++j) {
      if (std::abs(dst[j]) > std::abs(dst[arg])) arg = j;
    }
    if (dst[arg] < 0.0) {
      for (std::size_t j = 0; j < d; ++j) dst[j] = -dst[j];
    }
  }
  model.energy_kept = kept / total;
  return model;
}

void PcaModel::transform(std::span<const double> x, std::span<double> out) const {
  const std::size_t d = input_dim();
  std::vector<double> centered(d);
  for (std::size_t j = 0; j < d; ++j) centered[j] = x[j] - mean[j];
  for (std::size_t c = 0; c < output_dim(); ++c) {
    out[c] = kernels::dot(components.row(c).data(), centered.data(), d);
  }
}

void PcaModel::reconstruct(std::span<const double> z, std::span<double> x) const {
  const std::size_t d = input_dim();
  for (std::size_t j = 0; j < d; ++j) x[j] = mean[j];
  for (std::size_t c = 0; c < output_dim(); ++c) {
    kernels::axpy(z[c], components.row(c).data(), x.data(), d);
  }
}

namespace {

const char* band_name(Band b) { return b == Band::Mid ? "mid" : "high"; }

// Uniform deterministic subsample: keeps ~cap of total windows by stride.
bool keep_window(std::size_t index, std::size_t total, std::size_t cap) {
  if (total <= cap) return true;
  return (index + 1) * cap / total > index * cap / total;
}

}  // namespace

FeaturePipeline fit_pipeline(const std::vector<EmbeddedSentence>& corpus,
                             const freq_analysis::BandPartition& partition,
                             const NgramConfig& config) {
  config.validate();
  if (corpus.empty()) throw Error::bad_input("fit_pipeline: empty corpus");
  const std::size_t dim = corpus.front().dim();
  if (partition.dim() != dim) {
    throw Error::bad_input("fit_pipeline: partition covers " +
                           std::to_string(partition.dim()) +
                           " dimensions, embeddings have " + std::to_string(dim));
  }
  for (const EmbeddedSentence& s : corpus) {
    if (s.dim() != dim) {
      throw Error::bad_input("fit_pipeline: mixed embedding dimensions");
    }
  }

  std::size_t total_tokens = 0;
  for (const EmbeddedSentence& s : corpus) total_tokens += s.length();
  if (total_tokens == 0) throw Error::bad_input("fit_pipeline: corpus has no tokens");

  FeaturePipeline pipeline;
  pipeline.partition = partition;
  pipeline.config = config;
  pipeline.embedding_dim = dim;

  std::size_t offset = 0;
  for (Band band : {Band::Mid, Band::High}) {
    const std::vector<std::uint32_t>& dims =
        band == Band::Mid ? partition.mid : partition.high;
    const std::vector<int>& orders =
        band == Band::Mid ? config.mid_orders : config.high_orders;
    if (dims.empty()) continue;

    for (int order : orders) {
      Block block;
      block.band = band;
      block.order = order;
      block.input_dim = dims.size() * static_cast<std::size_t>(order);
      block.offset = offset;
      block.has_pca = config.pca_for_order(order);

      if (block.has_pca) {
        const std::size_t cap = std::max<std::size_t>(2, config.max_pca_samples);
        std::size_t n_keep = std::min(total_tokens, cap);
        Matrix samples(n_keep, block.input_dim);
        std::size_t row = 0, index = 0;
        for (const EmbeddedSentence& s : corpus) {
          for (std::size_t m = 0; m < s.length(); ++m, ++index) {
            if (!keep_window(index, total_tokens, cap)) continue;
            extract_ngram_block(s, dims, order, m, samples.row(row));
            ++row;
          }
        }
        samples.rows = row;
        samples.data.resize(row * block.input_dim);
        try {
          block.pca = fit_pca(samples, config.energy_threshold);
        } catch (const Error& e) {
          throw Error(e.kind(), std::string(band_name(band)) + "-" +
                                    std::to_string(order) + "gram block: " + e.what());
        }
        block.length = block.pca.output_dim();
      } else {
        block.length = block.input_dim;
      }
      offset += block.length;
      pipeline.blocks.push_back(std::move(block));
    }
  }
  pipeline.output_dim = offset;
  if (pipeline.output_dim == 0) {
    throw Error::bad_input("fit_pipeline: no feature blocks (mid and high bands empty)");
  }
  return pipeline;
}

std::vector<double> FeaturePipeline::transform_token(
    const EmbeddedSentence& sentence, std::size_t m) const {
  if (sentence.dim() != embedding_dim) {
    throw Error::bad_input("transform: sentence dimension " +
                           std::to_string(sentence.dim()) +
                           " does not match pipeline dimension " +
                           std::to_string(embedding_dim));
  }
  std::vector<double> out(output_dim, 0.0);
  std::vector<double> window;
  for (const Block& block : blocks) {
    const std::vector<std::uint32_t>& dims = band_dims(block.band);
    window.resize(block.input_dim);
    extract_ngram_block(sentence, dims, block.order, m, window);
    std::span<double> dst(out.data() + block.offset, block.length);
    if (block.has_pca) {
      block.pca.transform(window, dst);
    } else {
      std::copy(window.begin(), window.end(), dst.begin());
    }
  }
  return out;
}

Matrix FeaturePipeline::transform(const EmbeddedSentence& sentence) const {
  Matrix out(sentence.length(), output_dim);
  for (std::size_t m = 0; m < sentence.length(); ++m) {
    std::vector<double> f = transform_token(sentence, m);
    std::copy(f.begin(), f.end(), out.row(m).begin());
  }
  return out;
}

}  // namespace gwpt::feature_pipeline
