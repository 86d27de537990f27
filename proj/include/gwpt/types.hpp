#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gwpt/error.hpp"

namespace gwpt {

// One supervised unit: parallel token/tag lists, both non-empty.
struct TaggedSentence {
  std::vector<std::string> tokens;
  std::vector<std::string> tags;

  bool operator==(const TaggedSentence&) const = default;
};

// Dense 0-based class alphabet. Symbols are kept sorted so ids are stable
// across runs given identical training input.
class TagSet {
 public:
  TagSet() = default;
  explicit TagSet(std::vector<std::string> sorted_symbols);

  const std::vector<std::string>& symbols() const { return symbols_; }
  std::size_t size() const { return symbols_.size(); }

  std::optional<int> id_of(std::string_view tag) const;
  // Unseen tags are a hard error: the class space is fixed at train time.
  int require(std::string_view tag) const;
  const std::string& symbol(int id) const;

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, int> index_;
};

// Dense row-major matrix of doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  std::span<double> row(std::size_t r) {
    return std::span<double>(data.data() + r * cols, cols);
  }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(data.data() + r * cols, cols);
  }
};

// Embedding matrix of one sentence: `dim` rows (one per embedding dimension)
// by `length` columns (one per token), row-major. A row traces one dimension
// across the word sequence.
class EmbeddedSentence {
 public:
  EmbeddedSentence() = default;
  EmbeddedSentence(std::size_t dim, std::size_t length)
      : dim_(dim), length_(length), data_(dim * length, 0.0) {}

  std::size_t dim() const { return dim_; }
  std::size_t length() const { return length_; }

  double& at(std::size_t l, std::size_t m) { return data_[l * length_ + m]; }
  double at(std::size_t l, std::size_t m) const { return data_[l * length_ + m]; }

  std::span<const double> row(std::size_t l) const {
    return std::span<const double>(data_.data() + l * length_, length_);
  }
  std::span<double> row(std::size_t l) {
    return std::span<double>(data_.data() + l * length_, length_);
  }

  // Gold tags (may be empty for unannotated input) and per-token OOV flags.
  std::vector<std::string> tags;
  std::vector<std::uint8_t> oov;

 private:
  std::size_t dim_ = 0;
  std::size_t length_ = 0;
  std::vector<double> data_;
};

}  // namespace gwpt
