#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gwpt/types.hpp"

namespace gwpt::freq_analysis {

// Normalized sign-change ratio of a mean-removed row: the fraction of
// consecutive positions whose signs differ, with sign(0) counted positive.
// Rows need at least two entries.
double nsc(std::span<const double> row);

struct FrequencyProfile {
  // Corpus-averaged NSC per embedding dimension, each in [0,1].
  std::vector<double> avg_nsc;
  // Permutation of 0..L-1 sorting avg_nsc ascending, ties by original index.
  std::vector<std::uint32_t> sorted_order;

  std::size_t dim() const { return avg_nsc.size(); }
};

// Unweighted per-sentence average; sentences shorter than two tokens are
// excluded. Errors when no sentence is eligible.
FrequencyProfile frequency_profile(const std::vector<EmbeddedSentence>& corpus);

struct BandPartition {
  // Original dimension indices, each list ascending. Low dimensions are
  // discarded by the feature pipeline.
  std::vector<std::uint32_t> low, mid, high;
  // Cut positions as counts into sorted-NSC order:
  // low = sorted[0, cut_low), mid = sorted[cut_low, cut_high),
  // high = sorted[cut_high, L).
  std::uint32_t cut_low = 0;
  std::uint32_t cut_high = 0;

  std::size_t dim() const { return low.size() + mid.size() + high.size(); }
};

struct BandMethod {
  enum Kind { AutoElbow, Manual } kind = AutoElbow;
  // Manual cuts, counts into sorted order with 0 <= c1 <= c2 <= L.
  std::uint32_t c1 = 0;
  std::uint32_t c2 = 0;

  static BandMethod auto_elbow() { return BandMethod{AutoElbow, 0, 0}; }
  static BandMethod manual(std::uint32_t c1, std::uint32_t c2) {
    return BandMethod{Manual, c1, c2};
  }
};

// Auto mode cuts at the two points of maximum perpendicular distance to the
// chord joining the first and last points of the sorted curve, one searched
// in each half. A flat curve (all distances below 1e-9) degenerates to
// everything-mid with a warning.
BandPartition partition_bands(const FrequencyProfile& profile,
                              const BandMethod& method,
                              std::vector<std::string>* warnings = nullptr);

// CSV dump "dimension,avg_nsc,band" for plotting the sorted curve.
void write_profile_csv(std::ostream& out, const FrequencyProfile& profile,
                       const BandPartition& bands);

}  // namespace gwpt::freq_analysis
