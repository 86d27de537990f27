#pragma once

#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "gwpt/types.hpp"

namespace gwpt::embedding_store {

// Text word-vector table: header "count dim", then one
// "token v1 ... vdim" row per line, space-separated.
class WordVectorTable {
 public:
  static WordVectorTable load(std::istream& in,
                              std::vector<std::string>* warnings = nullptr);
  static WordVectorTable load_file(const std::string& path,
                                   std::vector<std::string>* warnings = nullptr);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return entries_.size(); }

  // Case-sensitive lookup; nullptr when absent.
  const std::vector<double>* find(const std::string& token) const;

  void insert(const std::string& token, std::vector<double> vec);

 private:
  std::size_t dim_ = 0;
  std::unordered_map<std::string, std::vector<double>> entries_;
};

// Precomputed per-token vectors, JSON lines:
//   {"sid": "<sentence id>", "vecs": [[...dim reals...], ...]}
// When a corpus file is embedded, sentence i is looked up under sid
// std::to_string(i) (0-based order of sentences in the file).
class TokenEmbeddingFile {
 public:
  static TokenEmbeddingFile load(std::istream& in);
  static TokenEmbeddingFile load_file(const std::string& path);

  std::size_t dim() const { return dim_; }
  std::size_t sentence_count() const { return by_sid_.size(); }

  // nullptr when the sentence id is unknown.
  const std::vector<std::vector<double>>* find(const std::string& sid) const;

 private:
  std::size_t dim_ = 0;
  std::unordered_map<std::string, std::vector<std::vector<double>>> by_sid_;
};

enum class OovPolicy { ZeroVector, LowercaseThenZero, Error };

OovPolicy oov_policy_from_name(const std::string& name);

// token -> subword units; a token's vector is the mean of its units' vectors.
using SubwordMap = std::unordered_map<std::string, std::vector<std::string>>;

// "token<TAB>unit1 unit2 ..." per line.
SubwordMap load_subword_map(std::istream& in);

EmbeddedSentence embed_tokens(const std::vector<std::string>& tokens,
                              const WordVectorTable& table, OovPolicy policy,
                              const SubwordMap* subwords = nullptr);

std::vector<EmbeddedSentence> embed_corpus(
    const std::vector<TaggedSentence>& sentences, const WordVectorTable& table,
    OovPolicy policy, const SubwordMap* subwords = nullptr);

// Contextual source must cover every (sentence, token) pair.
std::vector<EmbeddedSentence> embed_corpus(
    const std::vector<TaggedSentence>& sentences,
    const TokenEmbeddingFile& file);

EmbeddedSentence embed_tokens(const std::vector<std::string>& tokens,
                              const TokenEmbeddingFile& file,
                              const std::string& sid);

}  // namespace gwpt::embedding_store
