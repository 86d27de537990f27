#include "gwpt/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace gwpt::config {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_int(const std::string& value, const std::string& key) {
  T out{};
  const std::string t = trim(value);
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    throw Error::bad_input("config: key '" + key + "': expected integer, got '" + value + "'");
  }
  return out;
}

double parse_double(const std::string& value, const std::string& key) {
  const std::string t = trim(value);
  try {
    std::size_t pos = 0;
    double out = std::stod(t, &pos);
    if (pos != t.size()) throw std::invalid_argument(t);
    return out;
  } catch (const std::exception&) {
    throw Error::bad_input("config: key '" + key + "': expected number, got '" + value + "'");
  }
}

bool parse_bool(const std::string& value, const std::string& key) {
  const std::string t = trim(value);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw Error::bad_input("config: key '" + key + "': expected boolean, got '" + value + "'");
}

template <class T>
std::vector<T> parse_list(const std::string& value, const std::string& key) {
  std::vector<T> out;
  std::string t = trim(value);
  if (t.empty()) return out;
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(parse_int<T>(trim(item), key));
  }
  return out;
}

template <class T>
std::string join_list(const std::vector<T>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

std::string format_double(double v) {
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

}  // namespace

freq_analysis::BandMethod RunConfig::band_method_value() const {
  if (band_method == "auto") return freq_analysis::BandMethod::auto_elbow();
  if (band_method == "manual") {
    return freq_analysis::BandMethod::manual(band_cut_low, band_cut_high);
  }
  throw Error::bad_input("config: bands.method must be auto or manual, got '" +
                         band_method + "'");
}

feature_pipeline::NgramConfig RunConfig::ngram_config() const {
  feature_pipeline::NgramConfig ng;
  ng.mid_orders = mid_orders;
  ng.high_orders = high_orders;
  ng.pca_on_unigrams = pca_on_unigrams;
  ng.energy_threshold = pca_energy;
  ng.max_pca_samples = pca_max_samples;
  ng.validate();
  return ng;
}

gbdt::BoostParams RunConfig::boost_params() const {
  gbdt::BoostParams bp;
  bp.max_depth = depth;
  bp.n_trees_per_class = trees;
  bp.learning_rate = learning_rate;
  bp.l2_reg = l2_reg;
  bp.min_gain = min_gain;
  bp.early_stop_patience = patience;
  return bp;
}

embedding_store::OovPolicy RunConfig::oov_policy_value() const {
  return embedding_store::oov_policy_from_name(oov_policy);
}

void apply_preset(RunConfig& cfg, const std::string& name) {
  if (name == "fasttext-ud") {
    cfg.embedding_kind = "word";
    cfg.embedding_dim = 300;
    cfg.band_method = "manual";
    cfg.band_cut_low = 5;
    cfg.band_cut_high = 260;
    cfg.mid_orders = {1, 2};
    cfg.high_orders = {1, 2, 3};
    cfg.dft_k = 500;
    cfg.trees = 5000;
    cfg.depth = 3;
    cfg.account_pca_outputs = {490, 80, 120};
    cfg.account_classes = 17;
  } else if (name == "bert-ud") {
    cfg.embedding_kind = "contextual";
    cfg.embedding_dim = 768;
    cfg.band_method = "manual";
    cfg.band_cut_low = 50;
    cfg.band_cut_high = 750;
    cfg.mid_orders = {1};
    cfg.high_orders = {1, 2};
    cfg.dft_k = 700;
    cfg.trees = 4000;
    cfg.depth = 3;
    cfg.account_pca_outputs = {};
    cfg.account_classes = 17;
  } else {
    throw Error::bad_input("unknown preset '" + name +
                           "' (available: fasttext-ud, bert-ud)");
  }
}

void apply_key_value(RunConfig& cfg, const std::string& raw_key,
                     const std::string& value) {
  const std::string key = trim(raw_key);
  const std::string v = trim(value);

  if (key == "corpus.train") cfg.train_path = v;
  else if (key == "corpus.dev") cfg.dev_path = v;
  else if (key == "corpus.test") cfg.test_path = v;
  else if (key == "corpus.format") cfg.corpus_format = v;
  else if (key == "embedding.kind") cfg.embedding_kind = v;
  else if (key == "embedding.path") cfg.embedding_path = v;
  else if (key == "embedding.dev_path") cfg.embedding_dev_path = v;
  else if (key == "embedding.test_path") cfg.embedding_test_path = v;
  else if (key == "embedding.subwords") cfg.subword_path = v;
  else if (key == "embedding.oov") cfg.oov_policy = v;
  else if (key == "embedding.dim") cfg.embedding_dim = parse_int<std::size_t>(v, key);
  else if (key == "bands.method") cfg.band_method = v;
  else if (key == "bands.cut_low") cfg.band_cut_low = parse_int<std::uint32_t>(v, key);
  else if (key == "bands.cut_high") cfg.band_cut_high = parse_int<std::uint32_t>(v, key);
  else if (key == "ngram.mid") cfg.mid_orders = parse_list<int>(v, key);
  else if (key == "ngram.high") cfg.high_orders = parse_list<int>(v, key);
  else if (key == "ngram.pca_on_unigrams") cfg.pca_on_unigrams = parse_bool(v, key);
  else if (key == "pca.energy") cfg.pca_energy = parse_double(v, key);
  else if (key == "pca.max_samples") cfg.pca_max_samples = parse_int<std::size_t>(v, key);
  else if (key == "dft.k") cfg.dft_k = parse_int<std::size_t>(v, key);
  else if (key == "dft.grid") cfg.dft_grid = parse_int<int>(v, key);
  else if (key == "dft.max_samples") cfg.dft_max_samples = parse_int<std::size_t>(v, key);
  else if (key == "gbdt.trees") cfg.trees = parse_int<int>(v, key);
  else if (key == "gbdt.depth") cfg.depth = parse_int<int>(v, key);
  else if (key == "gbdt.learning_rate") cfg.learning_rate = parse_double(v, key);
  else if (key == "gbdt.lambda") cfg.l2_reg = parse_double(v, key);
  else if (key == "gbdt.min_gain") cfg.min_gain = parse_double(v, key);
  else if (key == "gbdt.patience") cfg.patience = parse_int<int>(v, key);
  else if (key == "account.pca_outputs") cfg.account_pca_outputs = parse_list<std::int64_t>(v, key);
  else if (key == "account.classes") cfg.account_classes = parse_int<int>(v, key);
  else if (key == "seed") cfg.seed = parse_int<std::uint64_t>(v, key);
  else throw Error::bad_input("config: unknown key '" + key + "'");
}

void apply_config_stream(RunConfig& cfg, std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error::bad_input("config: line " + std::to_string(line_no) +
                             ": expected 'key = value'");
    }
    apply_key_value(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error::bad_input("cannot open config file: " + path);
  apply_config_stream(cfg, in);
}

std::string canonical_text(const RunConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> kv = {
      {"account.classes", std::to_string(cfg.account_classes)},
      {"account.pca_outputs", join_list(cfg.account_pca_outputs)},
      {"bands.cut_high", std::to_string(cfg.band_cut_high)},
      {"bands.cut_low", std::to_string(cfg.band_cut_low)},
      {"bands.method", cfg.band_method},
      {"corpus.dev", cfg.dev_path},
      {"corpus.format", cfg.corpus_format},
      {"corpus.test", cfg.test_path},
      {"corpus.train", cfg.train_path},
      {"dft.grid", std::to_string(cfg.dft_grid)},
      {"dft.k", std::to_string(cfg.dft_k)},
      {"dft.max_samples", std::to_string(cfg.dft_max_samples)},
      {"embedding.dev_path", cfg.embedding_dev_path},
      {"embedding.dim", std::to_string(cfg.embedding_dim)},
      {"embedding.kind", cfg.embedding_kind},
      {"embedding.oov", cfg.oov_policy},
      {"embedding.path", cfg.embedding_path},
      {"embedding.subwords", cfg.subword_path},
      {"embedding.test_path", cfg.embedding_test_path},
      {"gbdt.depth", std::to_string(cfg.depth)},
      {"gbdt.lambda", format_double(cfg.l2_reg)},
      {"gbdt.learning_rate", format_double(cfg.learning_rate)},
      {"gbdt.min_gain", format_double(cfg.min_gain)},
      {"gbdt.patience", std::to_string(cfg.patience)},
      {"gbdt.trees", std::to_string(cfg.trees)},
      {"ngram.high", join_list(cfg.high_orders)},
      {"ngram.mid", join_list(cfg.mid_orders)},
      {"ngram.pca_on_unigrams", cfg.pca_on_unigrams ? "true" : "false"},
      {"pca.energy", format_double(cfg.pca_energy)},
      {"pca.max_samples", std::to_string(cfg.pca_max_samples)},
      {"seed", std::to_string(cfg.seed)},
  };
  std::sort(kv.begin(), kv.end());
  std::string out;
  for (const auto& [k, value] : kv) {
    out += k;
    out += " = ";
    out += value;
    out += '\n';
  }
  return out;
}

RunConfig from_canonical_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  apply_config_stream(cfg, in);
  return cfg;
}

std::uint64_t fingerprint(const RunConfig& cfg) {
  const std::string text = canonical_text(cfg);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace gwpt::config
