#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gwpt/dft_select.hpp"
#include "gwpt/feature_pipeline.hpp"
#include "gwpt/freq_analysis.hpp"
#include "gwpt/gbdt.hpp"
#include "gwpt/types.hpp"

namespace gwpt::archive {

// Self-contained trained model. Single file, little-endian:
//   magic "GWPT", u32 format version, then length-prefixed sections
//   (u32 id + u64 byte length + payload) in fixed order:
//   1 tag set, 2 frequency profile, 3 feature pipeline (with band
//   partition), 4 DFT losses + selected indices, 5 GBDT forests,
//   6 producing config text. Unknown versions are refused on load.
struct ModelArchive {
  static constexpr std::uint32_t kVersion = 1;

  TagSet tagset;
  freq_analysis::FrequencyProfile profile;
  feature_pipeline::FeaturePipeline pipeline;
  std::vector<double> dft_losses;        // one per pipeline output feature
  std::vector<std::uint32_t> selected;   // ascending indices into pipeline output
  gbdt::GbdtModel model;
  std::string config_text;               // canonical producing config
  std::uint64_t fingerprint = 0;

  void save_stream(std::ostream& out) const;
  // Writes to a temp file and renames, so no partial archive is left behind.
  void save(const std::string& path) const;

  static ModelArchive load_stream(std::istream& in);
  static ModelArchive load(const std::string& path);

  // Feature vectors for the classifier: pipeline transform restricted to
  // the selected indices.
  std::vector<double> features_for_token(const EmbeddedSentence& sentence,
                                         std::size_t m) const;
};

}  // namespace gwpt::archive
