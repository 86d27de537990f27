#include "gwpt/corpus_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace gwpt::corpus_io {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c); });
}

// Multiword range id "3-4" or empty-node id "3.1".
bool is_skippable_id(const std::string& id, char sep) {
  std::size_t pos = id.find(sep);
  if (pos == std::string::npos) return false;
  return all_digits(std::string_view(id).substr(0, pos)) &&
         all_digits(std::string_view(id).substr(pos + 1));
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

void warn(std::vector<std::string>* warnings, const std::string& msg) {
  if (warnings) warnings->push_back(msg);
}

}  // namespace

Format format_from_name(const std::string& name) {
  if (name == "conllu") return Format::Conllu;
  if (name == "tsv") return Format::Tsv;
  if (name == "txt" || name == "plain") return Format::Plain;
  throw Error::bad_input("unknown corpus format '" + name +
                         "' (expected conllu, tsv or txt)");
}

std::vector<TaggedSentence> parse_conllu(std::istream& in,
                                         std::vector<std::string>* warnings) {
  std::vector<TaggedSentence> sentences;
  TaggedSentence cur;
  bool block_seen = false;  // any non-blank line since the last boundary
  std::string line;
  std::size_t line_no = 0;

  auto flush = [&]() {
    if (!cur.tokens.empty()) {
      sentences.push_back(std::move(cur));
    } else if (block_seen) {
      warn(warnings, "conllu: sentence block ending at line " +
                         std::to_string(line_no) + " has no token lines, skipped");
    }
    cur = TaggedSentence{};
    block_seen = false;
  };

  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) {
      flush();
      continue;
    }
    block_seen = true;
    if (line[0] == '#') continue;
    std::vector<std::string> fields = split(line, '\t');
    if (fields.size() != 10) {
      throw Error::bad_input("conllu: line " + std::to_string(line_no) + ": expected 10 tab-separated columns, got " +
                             std::to_string(fields.size()));
    }
    if (is_skippable_id(fields[0], '-') || is_skippable_id(fields[0], '.')) {
      continue;
    }
    if (fields[1].empty()) {
      throw Error::bad_input("conllu: line " + std::to_string(line_no) +
                             ": empty FORM column");
    }
    cur.tokens.push_back(fields[1]);
    cur.tags.push_back(fields[3]);
  }
  flush();
  return sentences;
}

std::vector<TaggedSentence> parse_tsv(std::istream& in,
                                      std::vector<std::string>* warnings) {
  (void)warnings;
  std::vector<TaggedSentence> sentences;
  TaggedSentence cur;
  std::string line;
  std::size_t line_no = 0;

  auto flush = [&]() {
    if (!cur.tokens.empty()) sentences.push_back(std::move(cur));
    cur = TaggedSentence{};
  };

  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) {
      flush();
      continue;
    }
    std::vector<std::string> fields = split(line, '\t');
    if (fields.size() != 2) {
      throw Error::bad_input("tsv: line " + std::to_string(line_no) +
                             ": expected 'token<TAB>tag', got " +
                             std::to_string(fields.size()) + " fields");
    }
    if (fields[0].empty() || fields[1].empty()) {
      throw Error::bad_input("tsv: line " + std::to_string(line_no) +
                             ": empty token or tag");
    }
    cur.tokens.push_back(std::move(fields[0]));
    cur.tags.push_back(std::move(fields[1]));
  }
  flush();
  return sentences;
}

std::vector<std::vector<std::string>> parse_plain(std::istream& in) {
  std::vector<std::vector<std::string>> sentences;
  std::string line;
  while (std::getline(in, line)) {
    strip_cr(line);
    std::vector<std::string> tokens;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) tokens.push_back(tok);
    if (!tokens.empty()) sentences.push_back(std::move(tokens));
  }
  return sentences;
}

void write_tsv(std::ostream& out, const std::vector<TaggedSentence>& sentences) {
  for (const TaggedSentence& s : sentences) {
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
      out << s.tokens[i] << '\t' << s.tags[i] << '\n';
    }
    out << '\n';
  }
}

TagSet build_tagset(const std::vector<TaggedSentence>& sentences) {
  if (sentences.empty()) {
    throw Error::bad_input("build_tagset: empty sentence list");
  }
  std::set<std::string> tags;
  for (const TaggedSentence& s : sentences) {
    tags.insert(s.tags.begin(), s.tags.end());
  }
  return TagSet(std::vector<std::string>(tags.begin(), tags.end()));
}

std::vector<TaggedSentence> load_corpus(const std::string& path, Format format,
                                        std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw Error::bad_input("cannot open corpus file: " + path);
  switch (format) {
    case Format::Conllu:
      return parse_conllu(in, warnings);
    case Format::Tsv:
      return parse_tsv(in, warnings);
    case Format::Plain:
      throw Error::bad_input("plain-text input has no tags: " + path);
  }
  throw Error::internal("unreachable corpus format");
}

}  // namespace gwpt::corpus_io

namespace gwpt {

TagSet::TagSet(std::vector<std::string> sorted_symbols)
    : symbols_(std::move(sorted_symbols)) {
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    index_.emplace(symbols_[i], static_cast<int>(i));
  }
}

std::optional<int> TagSet::id_of(std::string_view tag) const {
  auto it = index_.find(std::string(tag));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int TagSet::require(std::string_view tag) const {
  auto id = id_of(tag);
  if (!id) {
    throw Error::bad_input("tag '" + std::string(tag) +
                           "' does not occur in the training tag set");
  }
  return *id;
}

const std::string& TagSet::symbol(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= symbols_.size()) {
    throw Error::internal("tag id out of range: " + std::to_string(id));
  }
  return symbols_[static_cast<std::size_t>(id)];
}

}  // namespace gwpt
