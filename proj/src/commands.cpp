#include "gwpt/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "gwpt/dft_select.hpp"
#include "gwpt/feature_pipeline.hpp"
#include "gwpt/freq_analysis.hpp"
#include "gwpt/gbdt.hpp"

namespace gwpt::commands {

EmbeddedSentence EmbeddingSource::embed(const std::vector<std::string>& tokens,
                                        std::size_t sentence_index) const {
  if (contextual) {
    return embedding_store::embed_tokens(tokens, token_file,
                                         std::to_string(sentence_index));
  }
  return embedding_store::embed_tokens(tokens, table, policy,
                                       subwords ? &*subwords : nullptr);
}

std::vector<EmbeddedSentence> EmbeddingSource::embed(
    const std::vector<TaggedSentence>& sentences) const {
  if (contextual) {
    return embedding_store::embed_corpus(sentences, token_file);
  }
  return embedding_store::embed_corpus(sentences, table, policy,
                                       subwords ? &*subwords : nullptr);
}

EmbeddingSource load_embedding_source(const std::string& kind,
                                      const std::string& path,
                                      const std::string& oov_policy,
                                      const std::string& subword_path) {
  if (path.empty()) throw Error::bad_input("no embedding path given");
  EmbeddingSource src;
  if (kind == "contextual") {
    src.contextual = true;
    src.token_file = embedding_store::TokenEmbeddingFile::load_file(path);
  } else if (kind == "word") {
    src.contextual = false;
    src.table = embedding_store::WordVectorTable::load_file(path);
    src.policy = embedding_store::oov_policy_from_name(oov_policy);
    if (!subword_path.empty()) {
      std::ifstream in(subword_path);
      if (!in) throw Error::bad_input("cannot open subword map: " + subword_path);
      src.subwords = embedding_store::load_subword_map(in);
    }
  } else {
    throw Error::bad_input("embedding.kind must be word or contextual, got '" +
                           kind + "'");
  }
  return src;
}

namespace {

template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("train: ") + name + ": " + e.what());
  }
}

// Token-major feature matrix plus label ids for a corpus.
std::pair<Matrix, std::vector<int>> corpus_features(
    const std::vector<EmbeddedSentence>& corpus,
    const feature_pipeline::FeaturePipeline& pipeline, const TagSet& tagset) {
  std::size_t tokens = 0;
  for (const EmbeddedSentence& s : corpus) tokens += s.length();
  Matrix features(tokens, pipeline.output_dim);
  std::vector<int> labels;
  labels.reserve(tokens);
  std::size_t row = 0;
  for (const EmbeddedSentence& s : corpus) {
    Matrix f = pipeline.transform(s);
    for (std::size_t m = 0; m < s.length(); ++m, ++row) {
      std::copy(f.row(m).begin(), f.row(m).end(), features.row(row).begin());
      labels.push_back(tagset.require(s.tags[m]));
    }
  }
  return {std::move(features), std::move(labels)};
}

Matrix select_columns(const Matrix& features, const std::vector<std::uint32_t>& keep) {
  Matrix out(features.rows, keep.size());
  for (std::size_t i = 0; i < features.rows; ++i) {
    std::span<const double> src = features.row(i);
    std::span<double> dst = out.row(i);
    for (std::size_t j = 0; j < keep.size(); ++j) dst[j] = src[keep[j]];
  }
  return out;
}

}  // namespace

TrainOutcome train_model(const config::RunConfig& cfg) {
  TrainOutcome outcome;
  TrainReport& report = outcome.report;

  if (cfg.train_path.empty()) {
    throw Error::bad_input("train: no training corpus configured (corpus.train)");
  }
  const corpus_io::Format format = corpus_io::format_from_name(cfg.corpus_format);

  const std::vector<TaggedSentence> train = stage("load corpus", [&] {
    auto s = corpus_io::load_corpus(cfg.train_path, format, &report.warnings);
    if (s.empty()) throw Error::bad_input("training corpus is empty: " + cfg.train_path);
    return s;
  });
  report.train_sentences = train.size();
  for (const TaggedSentence& s : train) report.train_tokens += s.tokens.size();

  const TagSet tagset = corpus_io::build_tagset(train);
  report.tagset_size = tagset.size();

  const EmbeddingSource source = stage("load embeddings", [&] {
    auto src = load_embedding_source(cfg.embedding_kind, cfg.embedding_path,
                                     cfg.oov_policy, cfg.subword_path);
    if (cfg.embedding_dim != 0 && src.dim() != cfg.embedding_dim) {
      throw Error::bad_input("embedding file dimension " + std::to_string(src.dim()) +
                             " does not match embedding.dim = " +
                             std::to_string(cfg.embedding_dim));
    }
    return src;
  });
  report.embedding_dim = source.dim();

  const std::vector<EmbeddedSentence> embedded =
      stage("embed corpus", [&] { return source.embed(train); });

  const freq_analysis::FrequencyProfile profile = stage(
      "frequency profile", [&] { return freq_analysis::frequency_profile(embedded); });

  const freq_analysis::BandPartition partition = stage("band partition", [&] {
    return freq_analysis::partition_bands(profile, cfg.band_method_value(),
                                          &report.warnings);
  });
  report.low_dims = partition.low.size();
  report.mid_dims = partition.mid.size();
  report.high_dims = partition.high.size();

  const feature_pipeline::FeaturePipeline pipeline = stage("fit pipeline", [&] {
    return feature_pipeline::fit_pipeline(embedded, partition, cfg.ngram_config());
  });
  report.feature_dim_before = pipeline.output_dim;

  auto [features, labels] = stage("transform corpus", [&] {
    return corpus_features(embedded, pipeline, tagset);
  });

  dft_select::DftRanking ranking;
  std::vector<std::uint32_t> selected;
  stage("feature selection", [&] {
    const std::vector<std::size_t> sample = dft_select::balanced_subsample(
        labels, static_cast<int>(tagset.size()), cfg.dft_max_samples, cfg.seed);
    if (sample.size() == features.rows) {
      ranking = dft_select::rank_features(features, labels,
                                          static_cast<int>(tagset.size()), cfg.dft_grid);
    } else {
      Matrix sub(sample.size(), features.cols);
      std::vector<int> sub_labels(sample.size());
      for (std::size_t i = 0; i < sample.size(); ++i) {
        std::copy(features.row(sample[i]).begin(), features.row(sample[i]).end(),
                  sub.row(i).begin());
        sub_labels[i] = labels[sample[i]];
      }
      ranking = dft_select::rank_features(sub, sub_labels,
                                          static_cast<int>(tagset.size()), cfg.dft_grid);
    }
    if (cfg.dft_k == 0) {
      selected.resize(features.cols);
      std::iota(selected.begin(), selected.end(), 0u);
    } else {
      if (cfg.dft_k > features.cols) {
        throw Error::bad_input("dft.k = " + std::to_string(cfg.dft_k) +
                               " exceeds feature dimension " +
                               std::to_string(features.cols));
      }
      selected = dft_select::select_top_k(ranking, cfg.dft_k);
    }
    return 0;
  });
  report.feature_dim_after = selected.size();

  const Matrix train_features = select_columns(features, selected);

  // Optional dev split for early stopping and the reported accuracy.
  Matrix dev_features;
  std::vector<int> dev_labels;
  bool has_dev = !cfg.dev_path.empty();
  if (has_dev) {
    stage("load dev split", [&] {
      const auto dev = corpus_io::load_corpus(cfg.dev_path, format, &report.warnings);
      if (dev.empty()) throw Error::bad_input("dev corpus is empty: " + cfg.dev_path);
      const EmbeddingSource* dev_source = &source;
      EmbeddingSource contextual_dev;
      if (source.contextual) {
        if (cfg.embedding_dev_path.empty()) {
          throw Error::bad_input("contextual embeddings need embedding.dev_path for the dev split");
        }
        contextual_dev = load_embedding_source("contextual", cfg.embedding_dev_path,
                                               cfg.oov_policy, "");
        if (contextual_dev.dim() != source.dim()) {
          throw Error::bad_input("dev embedding dimension does not match training");
        }
        dev_source = &contextual_dev;
      }
      const std::vector<EmbeddedSentence> dev_embedded = dev_source->embed(dev);
      auto [df, dl] = corpus_features(dev_embedded, pipeline, tagset);
      dev_features = select_columns(df, selected);
      dev_labels = std::move(dl);
      return 0;
    });
  }

  gbdt::FitTrace trace;
  const gbdt::GbdtModel model = stage("fit classifier", [&] {
    return gbdt::fit(train_features, labels, static_cast<int>(tagset.size()),
                     cfg.boost_params(), has_dev ? &dev_features : nullptr,
                     dev_labels, &trace);
  });
  report.trees_configured = cfg.trees;
  report.trees_actual = model.forests.empty() ? 0 : model.forests[0].size();
  report.best_round = trace.best_round;

  if (has_dev) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < dev_features.rows; ++i) {
      correct += model.predict(dev_features.row(i)) == dev_labels[i];
    }
    report.dev_accuracy = dev_features.rows == 0
                              ? 0.0
                              : static_cast<double>(correct) /
                                    static_cast<double>(dev_features.rows);
  }

  outcome.archive.tagset = tagset;
  outcome.archive.profile = profile;
  outcome.archive.pipeline = pipeline;
  outcome.archive.dft_losses = ranking.loss;
  outcome.archive.selected = selected;
  outcome.archive.model = model;
  outcome.archive.config_text = config::canonical_text(cfg);
  outcome.archive.fingerprint = config::fingerprint(cfg);
  report.fingerprint = outcome.archive.fingerprint;

  const accounting::AccountReport acct = accounting::account_archive(outcome.archive);
  report.params_exact = (acct.ngram_params_exact >= 0 ? acct.ngram_params_exact : 0) +
                        acct.gbdt_params_exact;
  report.flops_exact = (acct.ngram_flops_exact >= 0 ? acct.ngram_flops_exact : 0) +
                       acct.gbdt_flops_exact;
  return outcome;
}

void print_train_report(std::ostream& out, const TrainReport& report,
                        const std::string& archive_path, bool json) {
  char fp[32];
  std::snprintf(fp, sizeof(fp), "%016llx",
                static_cast<unsigned long long>(report.fingerprint));
  if (json) {
    nlohmann::json j{
        {"train_sentences", report.train_sentences},
        {"train_tokens", report.train_tokens},
        {"tagset_size", report.tagset_size},
        {"embedding_dim", report.embedding_dim},
        {"bands", {{"low", report.low_dims}, {"mid", report.mid_dims}, {"high", report.high_dims}}},
        {"feature_dim_before", report.feature_dim_before},
        {"feature_dim_after", report.feature_dim_after},
        {"trees_configured", report.trees_configured},
        {"trees_actual", report.trees_actual},
        {"best_round", report.best_round},
        {"params_exact", report.params_exact},
        {"flops_exact", report.flops_exact},
        {"fingerprint", fp},
        {"archive", archive_path},
        {"warnings", report.warnings},
    };
    if (report.dev_accuracy >= 0.0) j["dev_accuracy"] = report.dev_accuracy;
    out << j.dump(2) << '\n';
    return;
  }
  out << "train sentences:  " << report.train_sentences << " (" << report.train_tokens
      << " tokens)\n";
  out << "tag set:          " << report.tagset_size << " tags\n";
  out << "embedding dim:    " << report.embedding_dim << '\n';
  out << "bands:            low " << report.low_dims << ", mid " << report.mid_dims
      << ", high " << report.high_dims << '\n';
  out << "features:         " << report.feature_dim_before << " -> "
      << report.feature_dim_after << " after selection\n";
  out << "trees per class:  " << report.trees_actual << " (configured "
      << report.trees_configured;
  if (report.best_round >= 0) out << ", best round " << report.best_round;
  out << ")\n";
  if (report.dev_accuracy >= 0.0) {
    out << "dev accuracy:     " << report.dev_accuracy << '\n';
  }
  out << "params (exact):   " << report.params_exact << '\n';
  out << "flops (exact):    " << report.flops_exact << '\n';
  out << "archive:          " << archive_path << " (fingerprint " << fp << ")\n";
  for (const std::string& w : report.warnings) out << "warning: " << w << '\n';
}

void tag_sentences(const archive::ModelArchive& a,
                   const std::vector<std::vector<std::string>>& sentences,
                   const EmbeddingSource& source, std::ostream& out) {
  if (!sentences.empty() && source.dim() != a.pipeline.embedding_dim) {
    throw Error::bad_input("embedding dimension " + std::to_string(source.dim()) +
                           " does not match the model's " +
                           std::to_string(a.pipeline.embedding_dim));
  }
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const EmbeddedSentence e = source.embed(sentences[i], i);
    for (std::size_t m = 0; m < sentences[i].size(); ++m) {
      const std::vector<double> f = a.features_for_token(e, m);
      out << sentences[i][m] << '\t' << a.tagset.symbol(a.model.predict(f)) << '\n';
    }
    out << '\n';
  }
}

EvalReport evaluate(const archive::ModelArchive& a,
                    const std::vector<TaggedSentence>& gold,
                    const EmbeddingSource& source) {
  if (gold.empty()) throw Error::bad_input("eval: gold corpus is empty");
  if (source.dim() != a.pipeline.embedding_dim) {
    throw Error::bad_input("embedding dimension " + std::to_string(source.dim()) +
                           " does not match the model's " +
                           std::to_string(a.pipeline.embedding_dim));
  }
  const std::size_t n_tags = a.tagset.size();
  std::vector<std::size_t> matrix(n_tags * n_tags, 0);

  EvalReport report;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const EmbeddedSentence e = source.embed(gold[i].tokens, i);
    for (std::size_t m = 0; m < gold[i].tokens.size(); ++m) {
      const int gold_id = a.tagset.require(gold[i].tags[m]);
      const std::vector<double> f = a.features_for_token(e, m);
      const int pred = a.model.predict(f);
      ++matrix[static_cast<std::size_t>(gold_id) * n_tags +
               static_cast<std::size_t>(pred)];
      ++report.total;
      report.correct += (pred == gold_id);
    }
  }
  report.accuracy =
      static_cast<double>(report.correct) / static_cast<double>(report.total);
  report.per_tag.resize(n_tags);
  for (std::size_t g = 0; g < n_tags; ++g) {
    std::size_t count = 0;
    for (std::size_t p = 0; p < n_tags; ++p) {
      const std::size_t c = matrix[g * n_tags + p];
      count += c;
      if (c > 0) {
        report.confusion.emplace_back(static_cast<int>(g), static_cast<int>(p), c);
      }
    }
    report.per_tag[g] = {count, matrix[g * n_tags + g]};
  }
  return report;
}

void print_eval_report(std::ostream& out, const EvalReport& report,
                       const TagSet& tagset, bool json) {
  if (json) {
    nlohmann::json j{{"accuracy", report.accuracy},
                     {"correct", report.correct},
                     {"total", report.total}};
    for (std::size_t g = 0; g < report.per_tag.size(); ++g) {
      j["per_tag"][tagset.symbol(static_cast<int>(g))] = {
          {"gold", report.per_tag[g].first}, {"correct", report.per_tag[g].second}};
    }
    for (const auto& [g, p, c] : report.confusion) {
      j["confusion"].push_back(
          {{"gold", tagset.symbol(g)}, {"predicted", tagset.symbol(p)}, {"count", c}});
    }
    out << j.dump(2) << '\n';
    return;
  }
  out << "accuracy: " << report.accuracy << " (" << report.correct << "/"
      << report.total << ")\n";
  out << "per-tag gold/correct:\n";
  for (std::size_t g = 0; g < report.per_tag.size(); ++g) {
    if (report.per_tag[g].first == 0) continue;
    out << "  " << tagset.symbol(static_cast<int>(g)) << ": "
        << report.per_tag[g].first << "/" << report.per_tag[g].second << '\n';
  }
  out << "confusions (gold -> predicted: count):\n";
  for (const auto& [g, p, c] : report.confusion) {
    if (g == p) continue;
    out << "  " << tagset.symbol(g) << " -> " << tagset.symbol(p) << ": " << c << '\n';
  }
}

void inspect_profile(const archive::ModelArchive& a, std::ostream& out) {
  freq_analysis::write_profile_csv(out, a.profile, a.pipeline.partition);
}

void inspect_dft(const archive::ModelArchive& a, std::ostream& out) {
  std::vector<std::uint32_t> order(a.dft_losses.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t x, std::uint32_t y) {
    return a.dft_losses[x] < a.dft_losses[y];
  });
  std::vector<char> is_selected(a.dft_losses.size(), 0);
  for (std::uint32_t s : a.selected) is_selected[s] = 1;
  out << "feature_index,loss,selected\n";
  for (std::uint32_t idx : order) {
    out << idx << ',' << a.dft_losses[idx] << ','
        << static_cast<int>(is_selected[idx]) << '\n';
  }
}

void inspect_layout(const archive::ModelArchive& a, std::ostream& out) {
  nlohmann::json j;
  j["embedding_dim"] = a.pipeline.embedding_dim;
  j["output_dim"] = a.pipeline.output_dim;
  j["bands"] = {{"low", a.pipeline.partition.low.size()},
                {"mid", a.pipeline.partition.mid.size()},
                {"high", a.pipeline.partition.high.size()}};
  j["selected_features"] = a.selected.size();
  for (const feature_pipeline::Block& b : a.pipeline.blocks) {
    nlohmann::json jb{
        {"band", b.band == feature_pipeline::Band::Mid ? "mid" : "high"},
        {"order", b.order},
        {"input_dim", b.input_dim},
        {"offset", b.offset},
        {"length", b.length},
        {"pca", b.has_pca}};
    if (b.has_pca) {
      jb["pca_components"] = b.pca.output_dim();
      jb["energy_kept"] = b.pca.energy_kept;
    }
    j["blocks"].push_back(jb);
  }
  out << j.dump(2) << '\n';
}

}  // namespace gwpt::commands
