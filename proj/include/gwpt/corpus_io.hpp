#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gwpt/types.hpp"

namespace gwpt::corpus_io {

enum class Format { Conllu, Tsv, Plain };

Format format_from_name(const std::string& name);

// CoNLL-U reader: sentences separated by blank lines, token lines carry 10
// tab-separated columns, FORM from column 2 and UPOS from column 4. Comment
// lines, multiword ranges ("1-2") and empty nodes ("1.1") are skipped.
// Sentence blocks without token lines are dropped with a warning.
std::vector<TaggedSentence> parse_conllu(std::istream& in,
                                         std::vector<std::string>* warnings = nullptr);

// Two-column "token<TAB>tag" reader; a blank line ends a sentence.
// Consecutive blank lines never produce empty sentences.
std::vector<TaggedSentence> parse_tsv(std::istream& in,
                                      std::vector<std::string>* warnings = nullptr);

// Pre-tokenized plain text: one sentence per line, tokens split on spaces.
std::vector<std::vector<std::string>> parse_plain(std::istream& in);

// Inverse of parse_tsv on well-formed data.
void write_tsv(std::ostream& out, const std::vector<TaggedSentence>& sentences);

TagSet build_tagset(const std::vector<TaggedSentence>& sentences);

std::vector<TaggedSentence> load_corpus(const std::string& path, Format format,
                                        std::vector<std::string>* warnings = nullptr);

}  // namespace gwpt::corpus_io
