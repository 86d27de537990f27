#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gwpt/dft_select.hpp"
#include "gwpt/embedding_store.hpp"
#include "gwpt/feature_pipeline.hpp"
#include "gwpt/freq_analysis.hpp"
#include "gwpt/gbdt.hpp"

namespace gwpt::config {

// Flat key-value run configuration. Precedence when assembling a run:
// preset defaults, then config file, then command-line overrides.
struct RunConfig {
  // corpus
  std::string train_path;
  std::string dev_path;
  std::string test_path;
  std::string corpus_format = "tsv";  // conllu | tsv

  // embedding source
  std::string embedding_kind = "word";  // word | contextual
  std::string embedding_path;
  std::string embedding_dev_path;   // contextual kind only
  std::string embedding_test_path;  // contextual kind only
  std::string subword_path;
  std::string oov_policy = "lowercase";  // zero | lowercase | error
  std::size_t embedding_dim = 0;         // 0 = take from the file

  // frequency bands
  std::string band_method = "auto";  // auto | manual
  std::uint32_t band_cut_low = 0;
  std::uint32_t band_cut_high = 0;

  // adaptive N-grams
  std::vector<int> mid_orders{1};
  std::vector<int> high_orders{1};
  bool pca_on_unigrams = false;
  double pca_energy = 0.99;
  std::size_t pca_max_samples = 200000;

  // feature selection; dft_k = 0 keeps every feature
  std::size_t dft_k = 0;
  int dft_grid = 31;
  std::size_t dft_max_samples = 100000;

  // classifier
  int trees = 500;
  int depth = 3;
  double learning_rate = 0.1;
  double l2_reg = 1.0;
  double min_gain = 0.0;
  int patience = 50;

  // accounting (config mode)
  std::vector<std::int64_t> account_pca_outputs;
  int account_classes = 0;

  std::uint64_t seed = 1;

  freq_analysis::BandMethod band_method_value() const;
  feature_pipeline::NgramConfig ngram_config() const;
  gbdt::BoostParams boost_params() const;
  embedding_store::OovPolicy oov_policy_value() const;
};

// Named presets reproducing the published defaults.
//   fasttext-ud: word vectors, manual cuts 5/260 on 300 dims, mid 1,2-grams,
//                high 1,2,3-grams, 500 selected features, 5000 trees.
//   bert-ud:     contextual vectors, manual cuts 50/750 on 768 dims,
//                mid 1-grams, high 1,2-grams, 700 features, 4000 trees.
void apply_preset(RunConfig& cfg, const std::string& name);

// One "key = value" assignment; unknown keys are an error.
void apply_key_value(RunConfig& cfg, const std::string& key, const std::string& value);

// '#' starts a comment; blank lines are skipped.
void apply_config_stream(RunConfig& cfg, std::istream& in);
void apply_config_file(RunConfig& cfg, const std::string& path);

// Sorted "key = value" dump of every field; the archive stores this text.
std::string canonical_text(const RunConfig& cfg);
RunConfig from_canonical_text(const std::string& text);

// FNV-1a over the canonical text.
std::uint64_t fingerprint(const RunConfig& cfg);

}  // namespace gwpt::config
