#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gwpt/archive.hpp"
#include "gwpt/config.hpp"

namespace gwpt::accounting {

struct PcaBlockAccount {
  std::string name;             // e.g. "mid-2gram"
  bool band_is_mid = true;
  std::int64_t input_dim = 0;   // band dims * order
  std::int64_t output_dim = -1; // declared or fitted; -1 unknown
  std::int64_t param_bound = 0;     // input_dim^2
  std::int64_t flops_estimate = -1; // 2 * output_dim^2
  std::int64_t params_exact = -1;   // input_dim * k + input_dim
  std::int64_t flops_exact = -1;    // 2 * input_dim * k
};

// Parameter/FLOP table. The bound and estimate columns use the published
// plug-in arithmetic (per-block squared sizes and 2*n^2 transform FLOPs);
// exact columns are filled from a fitted archive.
struct AccountReport {
  std::vector<PcaBlockAccount> blocks;
  std::int64_t ngram_param_bound_mid = 0;
  std::int64_t ngram_param_bound_high = 0;
  std::int64_t ngram_param_bound_total = 0;
  std::int64_t ngram_flops_estimate = -1;
  std::int64_t ngram_params_exact = -1;
  std::int64_t ngram_flops_exact = -1;

  std::int64_t trees_per_class = 0;
  int depth = 0;
  int n_classes = 0;
  std::int64_t gbdt_params = 0;       // trees * full-tree params * classes
  std::int64_t gbdt_flops = 0;        // (trees*depth + trees) * classes
  std::int64_t gbdt_params_exact = -1;
  std::int64_t gbdt_flops_exact = -1;

  std::int64_t total_params() const;  // bound + formula columns
  std::int64_t total_flops() const;
};

// Config mode needs manual band cuts plus embedding.dim (band sizes are
// data-dependent under auto cuts) and account.classes.
AccountReport account_config(const config::RunConfig& cfg);

// Exact columns from the fitted blocks/forests; bound columns re-derived
// from the stored producing config.
AccountReport account_archive(const archive::ModelArchive& a);

void print_report(std::ostream& out, const AccountReport& report, bool json);

}  // namespace gwpt::accounting
