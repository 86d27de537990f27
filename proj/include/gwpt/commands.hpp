#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "gwpt/accounting.hpp"
#include "gwpt/archive.hpp"
#include "gwpt/config.hpp"
#include "gwpt/corpus_io.hpp"
#include "gwpt/embedding_store.hpp"

namespace gwpt::commands {

// One loaded embedding source (word-vector table or contextual per-token
// file) plus the lookup policy.
struct EmbeddingSource {
  bool contextual = false;
  embedding_store::WordVectorTable table;
  embedding_store::TokenEmbeddingFile token_file;
  embedding_store::OovPolicy policy = embedding_store::OovPolicy::LowercaseThenZero;
  std::optional<embedding_store::SubwordMap> subwords;

  std::size_t dim() const { return contextual ? token_file.dim() : table.dim(); }

  // sentence_index keys contextual lookups (sid = decimal index).
  EmbeddedSentence embed(const std::vector<std::string>& tokens,
                         std::size_t sentence_index) const;
  std::vector<EmbeddedSentence> embed(const std::vector<TaggedSentence>& sentences) const;
};

EmbeddingSource load_embedding_source(const std::string& kind,
                                      const std::string& path,
                                      const std::string& oov_policy,
                                      const std::string& subword_path);

struct TrainReport {
  std::size_t train_sentences = 0;
  std::size_t train_tokens = 0;
  std::size_t tagset_size = 0;
  std::size_t embedding_dim = 0;
  std::size_t low_dims = 0, mid_dims = 0, high_dims = 0;
  std::size_t feature_dim_before = 0;
  std::size_t feature_dim_after = 0;
  int trees_configured = 0;
  std::size_t trees_actual = 0;
  int best_round = -1;
  double dev_accuracy = -1.0;  // -1 = no dev split
  std::int64_t params_exact = 0;
  std::int64_t flops_exact = 0;
  std::uint64_t fingerprint = 0;
  std::vector<std::string> warnings;
};

struct TrainOutcome {
  archive::ModelArchive archive;
  TrainReport report;
};

// Full pipeline: profile -> bands -> N-gram/PCA -> DFT -> GBDT.
// Any stage error aborts with the stage name; nothing is written here.
TrainOutcome train_model(const config::RunConfig& cfg);

void print_train_report(std::ostream& out, const TrainReport& report,
                        const std::string& archive_path, bool json);

// token<TAB>tag lines, blank line after each sentence.
void tag_sentences(const archive::ModelArchive& a,
                   const std::vector<std::vector<std::string>>& sentences,
                   const EmbeddingSource& source, std::ostream& out);

struct EvalReport {
  std::size_t total = 0;
  std::size_t correct = 0;
  double accuracy = 0.0;
  // gold tag id -> (gold count, correct count)
  std::vector<std::pair<std::size_t, std::size_t>> per_tag;
  // (gold id, predicted id, count) for every observed pair, gold-major
  std::vector<std::tuple<int, int, std::size_t>> confusion;
};

EvalReport evaluate(const archive::ModelArchive& a,
                    const std::vector<TaggedSentence>& gold,
                    const EmbeddingSource& source);

void print_eval_report(std::ostream& out, const EvalReport& report,
                       const TagSet& tagset, bool json);

// inspect dumps
void inspect_profile(const archive::ModelArchive& a, std::ostream& out);
void inspect_dft(const archive::ModelArchive& a, std::ostream& out);
void inspect_layout(const archive::ModelArchive& a, std::ostream& out);

}  // namespace gwpt::commands
