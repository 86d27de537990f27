#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gwpt/freq_analysis.hpp"
#include "gwpt/types.hpp"

namespace gwpt::feature_pipeline {

// Per-band context-window orders. The low band is always discarded.
struct NgramConfig {
  std::vector<int> mid_orders{1};
  std::vector<int> high_orders{1};
  bool pca_on_unigrams = false;
  double energy_threshold = 0.99;
  std::size_t max_pca_samples = 200000;

  void validate() const;
  bool pca_for_order(int order) const {
    return order >= 2 || pca_on_unigrams;
  }
};

struct PcaModel {
  std::vector<double> mean;  // input-dim
  Matrix components;         // k x input-dim, orthonormal rows
  double energy_kept = 0.0;

  std::size_t input_dim() const { return mean.size(); }
  std::size_t output_dim() const { return components.rows; }

  // out = components * (x - mean); out.size() == output_dim().
  void transform(std::span<const double> x, std::span<double> out) const;
  // x = components^T * z + mean; inverse of transform on the retained span.
  void reconstruct(std::span<const double> z, std::span<double> x) const;
};

// Smallest component count whose eigenvalue mass reaches the threshold.
// Component signs are fixed so each row's largest-magnitude entry is positive.
PcaModel fit_pca(const Matrix& samples, double energy_threshold);

enum class Band : std::uint8_t { Mid = 0, High = 1 };

struct Block {
  Band band = Band::Mid;
  int order = 1;
  std::size_t input_dim = 0;   // |band| * order
  std::size_t offset = 0;      // position in the concatenated vector
  std::size_t length = 0;      // PCA output dim, or input_dim when raw
  bool has_pca = false;
  PcaModel pca;
};

struct FeaturePipeline {
  freq_analysis::BandPartition partition;
  NgramConfig config;
  std::vector<Block> blocks;
  std::size_t embedding_dim = 0;
  std::size_t output_dim = 0;

  const std::vector<std::uint32_t>& band_dims(Band b) const {
    return b == Band::Mid ? partition.mid : partition.high;
  }

  // Feature vector of token m; length output_dim.
  std::vector<double> transform_token(const EmbeddedSentence& sentence,
                                      std::size_t m) const;
  // All tokens of a sentence: length() x output_dim.
  Matrix transform(const EmbeddedSentence& sentence) const;
};

// Band-restricted window around position m. Offsets run from
// -floor((n-1)/2) to +floor(n/2); positions outside the sentence contribute
// zeros. `out` must hold band.size()*order values.
void extract_ngram_block(const EmbeddedSentence& sentence,
                         std::span<const std::uint32_t> band, int order,
                         std::size_t m, std::span<double> out);

FeaturePipeline fit_pipeline(const std::vector<EmbeddedSentence>& corpus,
                             const freq_analysis::BandPartition& partition,
                             const NgramConfig& config);

}  // namespace gwpt::feature_pipeline
