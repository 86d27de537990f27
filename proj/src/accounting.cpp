#include "gwpt/accounting.hpp"

#include <ostream>

#include <json.hpp>

namespace gwpt::accounting {

namespace {

std::string block_name(feature_pipeline::Band band, int order) {
  return std::string(band == feature_pipeline::Band::Mid ? "mid" : "high") + "-" +
         std::to_string(order) + "gram";
}

void finish_totals(AccountReport& report) {
  bool have_outputs = !report.blocks.empty();
  std::int64_t est = 0;
  for (const PcaBlockAccount& b : report.blocks) {
    if (b.band_is_mid) {
      report.ngram_param_bound_mid += b.param_bound;
    } else {
      report.ngram_param_bound_high += b.param_bound;
    }
    if (b.output_dim >= 0) {
      est += 2 * b.output_dim * b.output_dim;
    } else {
      have_outputs = false;
    }
  }
  report.ngram_param_bound_total =
      report.ngram_param_bound_mid + report.ngram_param_bound_high;
  report.ngram_flops_estimate = have_outputs ? est : -1;
}

}  // namespace

std::int64_t AccountReport::total_params() const {
  return ngram_param_bound_total + gbdt_params;
}

std::int64_t AccountReport::total_flops() const {
  return (ngram_flops_estimate >= 0 ? ngram_flops_estimate : 0) + gbdt_flops;
}

AccountReport account_config(const config::RunConfig& cfg) {
  if (cfg.band_method != "manual") {
    throw Error::bad_input(
        "account: config mode needs manual band cuts (auto cuts are "
        "data-dependent); account a trained archive instead");
  }
  if (cfg.embedding_dim == 0) {
    throw Error::bad_input("account: config mode needs embedding.dim");
  }
  if (cfg.account_classes < 1) {
    throw Error::bad_input("account: config mode needs account.classes");
  }
  if (cfg.band_cut_low > cfg.band_cut_high || cfg.band_cut_high > cfg.embedding_dim) {
    throw Error::bad_input("account: band cuts out of range for embedding.dim");
  }
  const feature_pipeline::NgramConfig ngram = cfg.ngram_config();

  AccountReport report;
  const std::int64_t mid_dims =
      static_cast<std::int64_t>(cfg.band_cut_high - cfg.band_cut_low);
  const std::int64_t high_dims =
      static_cast<std::int64_t>(cfg.embedding_dim - cfg.band_cut_high);

  std::size_t out_index = 0;
  auto add_band = [&](feature_pipeline::Band band, std::int64_t dims,
                      const std::vector<int>& orders) {
    if (dims == 0) return;
    for (int order : orders) {
      if (!ngram.pca_for_order(order)) continue;
      PcaBlockAccount block;
      block.name = block_name(band, order);
      block.band_is_mid = band == feature_pipeline::Band::Mid;
      block.input_dim = dims * order;
      block.param_bound = block.input_dim * block.input_dim;
      if (out_index < cfg.account_pca_outputs.size()) {
        block.output_dim = cfg.account_pca_outputs[out_index];
      }
      ++out_index;
      report.blocks.push_back(std::move(block));
    }
  };
  add_band(feature_pipeline::Band::Mid, mid_dims, ngram.mid_orders);
  add_band(feature_pipeline::Band::High, high_dims, ngram.high_orders);
  finish_totals(report);

  report.trees_per_class = cfg.trees;
  report.depth = cfg.depth;
  report.n_classes = cfg.account_classes;
  report.gbdt_params = cfg.trees * gbdt::full_tree_params(cfg.depth) *
                       cfg.account_classes;
  report.gbdt_flops = gbdt::count_flops(cfg.trees, cfg.depth, cfg.account_classes);
  return report;
}

AccountReport account_archive(const archive::ModelArchive& a) {
  AccountReport report;
  std::int64_t params_exact = 0;
  std::int64_t flops_exact = 0;
  for (const feature_pipeline::Block& b : a.pipeline.blocks) {
    if (!b.has_pca) continue;
    PcaBlockAccount block;
    block.name = block_name(b.band, b.order);
    block.band_is_mid = b.band == feature_pipeline::Band::Mid;
    block.input_dim = static_cast<std::int64_t>(b.input_dim);
    block.output_dim = static_cast<std::int64_t>(b.pca.output_dim());
    block.param_bound = block.input_dim * block.input_dim;
    block.params_exact = block.input_dim * block.output_dim + block.input_dim;
    block.flops_exact = 2 * block.input_dim * block.output_dim;
    params_exact += block.params_exact;
    flops_exact += block.flops_exact;
    report.blocks.push_back(std::move(block));
  }
  finish_totals(report);
  for (PcaBlockAccount& b : report.blocks) {
    b.flops_estimate = 2 * b.output_dim * b.output_dim;
  }
  report.ngram_params_exact = params_exact;
  report.ngram_flops_exact = flops_exact;

  const config::RunConfig cfg = config::from_canonical_text(a.config_text);
  report.trees_per_class = a.model.forests.empty()
                               ? 0
                               : static_cast<std::int64_t>(a.model.forests[0].size());
  report.depth = cfg.depth;
  report.n_classes = a.model.n_classes;
  report.gbdt_params = report.trees_per_class *
                       gbdt::full_tree_params(report.depth) * report.n_classes;
  report.gbdt_flops =
      gbdt::count_flops(report.trees_per_class, report.depth, report.n_classes);
  report.gbdt_params_exact = gbdt::count_params(a.model);
  report.gbdt_flops_exact = gbdt::count_flops(a.model);
  return report;
}

void print_report(std::ostream& out, const AccountReport& report, bool json) {
  if (json) {
    nlohmann::json j;
    for (const PcaBlockAccount& b : report.blocks) {
      nlohmann::json jb{{"name", b.name},
                        {"input_dim", b.input_dim},
                        {"output_dim", b.output_dim},
                        {"param_bound", b.param_bound},
                        {"flops_estimate", b.flops_estimate},
                        {"params_exact", b.params_exact},
                        {"flops_exact", b.flops_exact}};
      j["pca_blocks"].push_back(jb);
    }
    j["ngram"] = {{"param_bound_mid", report.ngram_param_bound_mid},
                  {"param_bound_high", report.ngram_param_bound_high},
                  {"param_bound_total", report.ngram_param_bound_total},
                  {"flops_estimate", report.ngram_flops_estimate},
                  {"params_exact", report.ngram_params_exact},
                  {"flops_exact", report.ngram_flops_exact}};
    j["gbdt"] = {{"trees_per_class", report.trees_per_class},
                 {"depth", report.depth},
                 {"classes", report.n_classes},
                 {"params", report.gbdt_params},
                 {"flops", report.gbdt_flops},
                 {"params_exact", report.gbdt_params_exact},
                 {"flops_exact", report.gbdt_flops_exact}};
    j["total"] = {{"params", report.total_params()},
                  {"flops", report.total_flops()}};
    out << j.dump(2) << '\n';
    return;
  }

  out << "component         params      flops\n";
  out << "Adaptive N-gram   " << report.ngram_param_bound_total << "      ";
  if (report.ngram_flops_estimate >= 0) {
    out << report.ngram_flops_estimate;
  } else {
    out << "n/a";
  }
  out << '\n';
  out << "XGBoost           " << report.gbdt_params << "     " << report.gbdt_flops
      << '\n';
  out << "Total             " << report.total_params() << "     "
      << report.total_flops() << '\n';

  out << "\nPCA blocks (param bound = in^2, flops estimate = 2*out^2):\n";
  for (const PcaBlockAccount& b : report.blocks) {
    out << "  " << b.name << ": in=" << b.input_dim << " out=";
    if (b.output_dim >= 0) {
      out << b.output_dim;
    } else {
      out << "?";
    }
    out << " bound=" << b.param_bound;
    if (b.flops_estimate >= 0) out << " flops_est=" << b.flops_estimate;
    if (b.params_exact >= 0) {
      out << " params_exact=" << b.params_exact << " flops_exact=" << b.flops_exact;
    }
    out << '\n';
  }
  out << "  mid bound total=" << report.ngram_param_bound_mid
      << " high bound total=" << report.ngram_param_bound_high << '\n';
  if (report.ngram_params_exact >= 0) {
    out << "  exact: params=" << report.ngram_params_exact
        << " flops=" << report.ngram_flops_exact << '\n';
  }
  if (report.gbdt_params_exact >= 0) {
    out << "XGBoost exact: params=" << report.gbdt_params_exact
        << " flops=" << report.gbdt_flops_exact << '\n';
  }
}

}  // namespace gwpt::accounting
