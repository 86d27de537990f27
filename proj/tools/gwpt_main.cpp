// gwpt: green word-embedding POS tagger.
// Subcommands: train, tag, eval, account, inspect.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gwpt/commands.hpp"

namespace {

using gwpt::Error;
using gwpt::ErrorKind;
namespace commands = gwpt::commands;
namespace config = gwpt::config;

struct ConfigArgs {
  std::string preset;
  std::string config_path;
  std::vector<std::string> sets;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

void add_config_options(CLI::App* cmd, ConfigArgs& args) {
  cmd->add_option("--preset", args.preset, "Named preset (fasttext-ud, bert-ud)");
  cmd->add_option("--config", args.config_path, "Key-value config file");
  cmd->add_option("--set", args.sets, "Override a single key, e.g. --set gbdt.trees=100");
  cmd->add_option("--seed", args.seed, "Override the run seed")
      ->each([&args](const std::string&) { args.seed_given = true; });
}

config::RunConfig resolve_config(const ConfigArgs& args) {
  config::RunConfig cfg;
  if (!args.preset.empty()) config::apply_preset(cfg, args.preset);
  if (!args.config_path.empty()) config::apply_config_file(cfg, args.config_path);
  for (const std::string& kv : args.sets) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos) {
      throw Error::bad_input("--set expects key=value, got '" + kv + "'");
    }
    config::apply_key_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (args.seed_given) cfg.seed = args.seed;
  return cfg;
}

std::vector<std::vector<std::string>> read_tag_input(const std::string& path,
                                                     const std::string& format) {
  std::ifstream in(path);
  if (!in) throw Error::bad_input("cannot open input file: " + path);
  if (format == "txt" || format == "plain") {
    return gwpt::corpus_io::parse_plain(in);
  }
  const auto parsed = format == "conllu" ? gwpt::corpus_io::parse_conllu(in)
                                         : gwpt::corpus_io::parse_tsv(in);
  std::vector<std::vector<std::string>> out;
  out.reserve(parsed.size());
  for (const auto& s : parsed) out.push_back(s.tokens);
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"gwpt - green word-embedding POS tagger"};
  app.require_subcommand(1);

  // train
  ConfigArgs train_args;
  std::string train_out;
  bool train_json = false;
  CLI::App* train = app.add_subcommand("train", "Train a tagger and write a model archive");
  add_config_options(train, train_args);
  train->add_option("--out", train_out, "Output archive path")->required();
  train->add_flag("--json", train_json, "JSON report");

  // tag
  std::string tag_model, tag_input, tag_format = "txt", tag_embeddings,
              tag_subwords, tag_oov, tag_out_path;
  CLI::App* tag = app.add_subcommand("tag", "Tag a corpus or raw tokenized text");
  tag->add_option("--model", tag_model, "Model archive")->required();
  tag->add_option("--input", tag_input, "Input file")->required();
  tag->add_option("--format", tag_format, "Input format: txt, tsv or conllu");
  tag->add_option("--embeddings", tag_embeddings, "Embedding source file")->required();
  tag->add_option("--subwords", tag_subwords, "Subword map (word vectors only)");
  tag->add_option("--oov", tag_oov, "OOV policy override: zero, lowercase or error");
  tag->add_option("--out", tag_out_path, "Write output here instead of stdout");

  // eval
  std::string eval_model, eval_gold, eval_format = "tsv", eval_embeddings,
              eval_subwords, eval_oov;
  bool eval_json = false;
  CLI::App* eval = app.add_subcommand("eval", "Token accuracy against a gold corpus");
  eval->add_option("--model", eval_model, "Model archive")->required();
  eval->add_option("--gold", eval_gold, "Gold corpus")->required();
  eval->add_option("--format", eval_format, "Gold format: tsv or conllu");
  eval->add_option("--embeddings", eval_embeddings, "Embedding source file")->required();
  eval->add_option("--subwords", eval_subwords, "Subword map (word vectors only)");
  eval->add_option("--oov", eval_oov, "OOV policy override");
  eval->add_flag("--json", eval_json, "JSON report");

  // account
  ConfigArgs account_args;
  std::string account_archive_path;
  bool account_json = false;
  CLI::App* account = app.add_subcommand("account", "Parameter and FLOP accounting");
  add_config_options(account, account_args);
  account->add_option("--archive", account_archive_path, "Account a trained archive");
  account->add_flag("--json", account_json, "JSON report");

  // inspect
  std::string inspect_archive_path, inspect_what = "layout", inspect_out_path;
  CLI::App* inspect = app.add_subcommand("inspect", "Dump profile/DFT/layout from an archive");
  inspect->add_option("--archive", inspect_archive_path, "Model archive")->required();
  inspect->add_option("--what", inspect_what, "profile, dft or layout");
  inspect->add_option("--out", inspect_out_path, "Write output here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // bad flags/usage are input errors
  }

  if (train->parsed()) {
    config::RunConfig cfg = resolve_config(train_args);
    commands::TrainOutcome outcome = commands::train_model(cfg);
    outcome.archive.save(train_out);
    commands::print_train_report(std::cout, outcome.report, train_out, train_json);
    return 0;
  }

  if (tag->parsed()) {
    const auto a = gwpt::archive::ModelArchive::load(tag_model);
    const config::RunConfig cfg = config::from_canonical_text(a.config_text);
    const std::string oov = tag_oov.empty() ? cfg.oov_policy : tag_oov;
    const std::string subwords = tag_subwords.empty() ? cfg.subword_path : tag_subwords;
    const auto source = commands::load_embedding_source(cfg.embedding_kind,
                                                        tag_embeddings, oov, subwords);
    const auto sentences = read_tag_input(tag_input, tag_format);
    if (tag_out_path.empty()) {
      commands::tag_sentences(a, sentences, source, std::cout);
    } else {
      std::ofstream out(tag_out_path);
      if (!out) throw Error::bad_input("cannot write output file: " + tag_out_path);
      commands::tag_sentences(a, sentences, source, out);
    }
    return 0;
  }

  if (eval->parsed()) {
    const auto a = gwpt::archive::ModelArchive::load(eval_model);
    const config::RunConfig cfg = config::from_canonical_text(a.config_text);
    const std::string oov = eval_oov.empty() ? cfg.oov_policy : eval_oov;
    const std::string subwords = eval_subwords.empty() ? cfg.subword_path : eval_subwords;
    const auto source = commands::load_embedding_source(cfg.embedding_kind,
                                                        eval_embeddings, oov, subwords);
    const auto gold = gwpt::corpus_io::load_corpus(
        eval_gold, gwpt::corpus_io::format_from_name(eval_format));
    const commands::EvalReport report = commands::evaluate(a, gold, source);
    commands::print_eval_report(std::cout, report, a.tagset, eval_json);
    return 0;
  }

  if (account->parsed()) {
    gwpt::accounting::AccountReport report;
    if (!account_archive_path.empty()) {
      report = gwpt::accounting::account_archive(
          gwpt::archive::ModelArchive::load(account_archive_path));
    } else {
      report = gwpt::accounting::account_config(resolve_config(account_args));
    }
    gwpt::accounting::print_report(std::cout, report, account_json);
    return 0;
  }

  if (inspect->parsed()) {
    const auto a = gwpt::archive::ModelArchive::load(inspect_archive_path);
    std::ofstream file_out;
    std::ostream* out = &std::cout;
    if (!inspect_out_path.empty()) {
      file_out.open(inspect_out_path);
      if (!file_out) throw Error::bad_input("cannot write output file: " + inspect_out_path);
      out = &file_out;
    }
    if (inspect_what == "profile") {
      commands::inspect_profile(a, *out);
    } else if (inspect_what == "dft") {
      commands::inspect_dft(a, *out);
    } else if (inspect_what == "layout") {
      commands::inspect_layout(a, *out);
    } else {
      throw Error::bad_input("--what must be profile, dft or layout, got '" +
                             inspect_what + "'");
    }
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::BadInput ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
}
