#include "gwpt/embedding_store.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include <json.hpp>

namespace gwpt::embedding_store {

namespace {

double parse_real(const std::string& text, std::size_t line_no) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw Error::bad_input("word vectors: line " + std::to_string(line_no) +
                           ": non-numeric or non-finite value '" + text + "'");
  }
  return value;
}

std::string lowercase(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

WordVectorTable WordVectorTable::load(std::istream& in,
                                      std::vector<std::string>* warnings) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error::bad_input("word vectors: empty stream");
  }
  std::istringstream header(line);
  std::size_t count = 0, dim = 0;
  if (!(header >> count >> dim) || dim == 0) {
    throw Error::bad_input("word vectors: malformed header '" + line +
                           "' (expected 'count dim')");
  }

  WordVectorTable table;
  table.dim_ = dim;
  table.entries_.reserve(count);

  std::size_t line_no = 1;
  std::string field;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string token;
    if (!(row >> token)) continue;
    std::vector<double> vec;
    vec.reserve(dim);
    while (row >> field) vec.push_back(parse_real(field, line_no));
    if (vec.size() != dim) {
      throw Error::bad_input("word vectors: line " + std::to_string(line_no) +
                             ": expected " + std::to_string(dim) + " values, got " +
                             std::to_string(vec.size()));
    }
    auto [it, inserted] = table.entries_.insert_or_assign(token, std::move(vec));
    (void)it;
    if (!inserted && warnings) {
      warnings->push_back("word vectors: line " + std::to_string(line_no) +
                          ": duplicate token '" + token + "', last entry wins");
    }
  }
  if (table.entries_.size() != count && warnings) {
    warnings->push_back("word vectors: header declared " + std::to_string(count) +
                        " entries, read " + std::to_string(table.entries_.size()));
  }
  return table;
}

WordVectorTable WordVectorTable::load_file(const std::string& path,
                                           std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw Error::bad_input("cannot open embedding file: " + path);
  return load(in, warnings);
}

const std::vector<double>* WordVectorTable::find(const std::string& token) const {
  auto it = entries_.find(token);
  return it == entries_.end() ? nullptr : &it->second;
}

void WordVectorTable::insert(const std::string& token, std::vector<double> vec) {
  if (dim_ == 0) dim_ = vec.size();
  if (vec.size() != dim_) {
    throw Error::bad_input("word vectors: inserted vector of length " +
                           std::to_string(vec.size()) + ", table dim is " +
                           std::to_string(dim_));
  }
  entries_.insert_or_assign(token, std::move(vec));
}

TokenEmbeddingFile TokenEmbeddingFile::load(std::istream& in) {
  TokenEmbeddingFile file;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error::bad_input("token embeddings: line " + std::to_string(line_no) +
                             ": " + e.what());
    }
    if (!rec.contains("sid") || !rec.contains("vecs")) {
      throw Error::bad_input("token embeddings: line " + std::to_string(line_no) +
                             ": record needs 'sid' and 'vecs'");
    }
    const std::string sid = rec["sid"].get<std::string>();
    std::vector<std::vector<double>> vecs;
    for (const auto& jv : rec["vecs"]) {
      std::vector<double> v = jv.get<std::vector<double>>();
      for (double x : v) {
        if (!std::isfinite(x)) {
          throw Error::bad_input("token embeddings: sentence '" + sid +
                                 "': non-finite value");
        }
      }
      if (file.dim_ == 0) file.dim_ = v.size();
      if (v.size() != file.dim_) {
        throw Error::bad_input("token embeddings: sentence '" + sid +
                               "': vector length " + std::to_string(v.size()) +
                               " differs from dimension " + std::to_string(file.dim_));
      }
      vecs.push_back(std::move(v));
    }
    if (file.dim_ == 0) {
      throw Error::bad_input("token embeddings: sentence '" + sid +
                             "': empty vector list");
    }
    file.by_sid_[sid] = std::move(vecs);
  }
  if (file.by_sid_.empty()) {
    throw Error::bad_input("token embeddings: no records");
  }
  return file;
}

TokenEmbeddingFile TokenEmbeddingFile::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error::bad_input("cannot open embedding file: " + path);
  return load(in);
}

const std::vector<std::vector<double>>* TokenEmbeddingFile::find(
    const std::string& sid) const {
  auto it = by_sid_.find(sid);
  return it == by_sid_.end() ? nullptr : &it->second;
}

OovPolicy oov_policy_from_name(const std::string& name) {
  if (name == "zero") return OovPolicy::ZeroVector;
  if (name == "lowercase") return OovPolicy::LowercaseThenZero;
  if (name == "error") return OovPolicy::Error;
  throw Error::bad_input("unknown oov policy '" + name +
                         "' (expected zero, lowercase or error)");
}

SubwordMap load_subword_map(std::istream& in) {
  SubwordMap map;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error::bad_input("subword map: line " + std::to_string(line_no) +
                             ": expected 'token<TAB>unit1 unit2 ...'");
    }
    std::string token = line.substr(0, tab);
    std::istringstream rest(line.substr(tab + 1));
    std::vector<std::string> units;
    std::string unit;
    while (rest >> unit) units.push_back(unit);
    if (token.empty() || units.empty()) {
      throw Error::bad_input("subword map: line " + std::to_string(line_no) +
                             ": empty token or unit list");
    }
    map[token] = std::move(units);
  }
  return map;
}

namespace {

// Looks a token up directly or through its subword units; empty result means
// OOV before policy handling.
std::vector<double> lookup_pooled(const std::string& token,
                                  const WordVectorTable& table,
                                  const SubwordMap* subwords) {
  if (subwords) {
    auto it = subwords->find(token);
    if (it != subwords->end()) {
      std::vector<double> sum(table.dim(), 0.0);
      std::size_t hits = 0;
      for (const std::string& unit : it->second) {
        if (const std::vector<double>* v = table.find(unit)) {
          for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += (*v)[i];
          ++hits;
        }
      }
      if (hits > 0) {
        for (double& x : sum) x /= static_cast<double>(hits);
        return sum;
      }
      return {};
    }
  }
  if (const std::vector<double>* v = table.find(token)) return *v;
  return {};
}

}  // namespace

EmbeddedSentence embed_tokens(const std::vector<std::string>& tokens,
                              const WordVectorTable& table, OovPolicy policy,
                              const SubwordMap* subwords) {
  EmbeddedSentence out(table.dim(), tokens.size());
  out.oov.assign(tokens.size(), 0);
  for (std::size_t m = 0; m < tokens.size(); ++m) {
    std::vector<double> vec = lookup_pooled(tokens[m], table, subwords);
    if (vec.empty() && policy == OovPolicy::LowercaseThenZero) {
      vec = lookup_pooled(lowercase(tokens[m]), table, subwords);
    }
    if (vec.empty()) {
      if (policy == OovPolicy::Error) {
        throw Error::bad_input("out-of-vocabulary token '" + tokens[m] + "'");
      }
      out.oov[m] = 1;  // column stays zero
      continue;
    }
    for (std::size_t l = 0; l < vec.size(); ++l) out.at(l, m) = vec[l];
  }
  return out;
}

std::vector<EmbeddedSentence> embed_corpus(
    const std::vector<TaggedSentence>& sentences, const WordVectorTable& table,
    OovPolicy policy, const SubwordMap* subwords) {
  std::vector<EmbeddedSentence> out;
  out.reserve(sentences.size());
  for (const TaggedSentence& s : sentences) {
    EmbeddedSentence e = embed_tokens(s.tokens, table, policy, subwords);
    e.tags = s.tags;
    out.push_back(std::move(e));
  }
  return out;
}

EmbeddedSentence embed_tokens(const std::vector<std::string>& tokens,
                              const TokenEmbeddingFile& file,
                              const std::string& sid) {
  const std::vector<std::vector<double>>* vecs = file.find(sid);
  if (!vecs) {
    throw Error::bad_input("token embeddings: no record for sentence '" + sid + "'");
  }
  if (vecs->size() != tokens.size()) {
    throw Error::bad_input("token embeddings: sentence '" + sid + "' has " +
                           std::to_string(vecs->size()) + " vectors for " +
                           std::to_string(tokens.size()) + " tokens");
  }
  EmbeddedSentence out(file.dim(), tokens.size());
  out.oov.assign(tokens.size(), 0);
  for (std::size_t m = 0; m < tokens.size(); ++m) {
    for (std::size_t l = 0; l < file.dim(); ++l) out.at(l, m) = (*vecs)[m][l];
  }
  return out;
}

std::vector<EmbeddedSentence> embed_corpus(
    const std::vector<TaggedSentence>& sentences,
    const TokenEmbeddingFile& file) {
  std::vector<EmbeddedSentence> out;
  out.reserve(sentences.size());
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    EmbeddedSentence e = embed_tokens(sentences[i].tokens, file, std::to_string(i));
    e.tags = sentences[i].tags;
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace gwpt::embedding_store
