#include "gwpt/freq_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "gwpt/kernels.hpp"

namespace gwpt::freq_analysis {

double nsc(std::span<const double> row) {
  const std::size_t m = row.size();
  if (m < 2) {
    throw Error::bad_input("sentence too short for NSC (needs at least 2 tokens)");
  }
  const double mean = kernels::reduce_add(row.data(), m) / static_cast<double>(m);
  const std::size_t changes = kernels::count_sign_changes(row.data(), m, mean);
  return static_cast<double>(changes) / static_cast<double>(m - 1);
}

FrequencyProfile frequency_profile(const std::vector<EmbeddedSentence>& corpus) {
  std::size_t dim = 0;
  for (const EmbeddedSentence& s : corpus) {
    if (s.length() >= 2) {
      dim = s.dim();
      break;
    }
  }
  if (dim == 0) {
    throw Error::bad_input("frequency profile: no sentence with at least 2 tokens");
  }

  std::vector<double> sum(dim, 0.0);
  std::size_t eligible = 0;
  for (const EmbeddedSentence& s : corpus) {
    if (s.length() < 2) continue;
    if (s.dim() != dim) {
      throw Error::bad_input("frequency profile: mixed embedding dimensions (" +
                             std::to_string(dim) + " vs " + std::to_string(s.dim()) + ")");
    }
    for (std::size_t l = 0; l < dim; ++l) sum[l] += nsc(s.row(l));
    ++eligible;
  }

  FrequencyProfile profile;
  profile.avg_nsc.resize(dim);
  for (std::size_t l = 0; l < dim; ++l) {
    profile.avg_nsc[l] = sum[l] / static_cast<double>(eligible);
  }
  profile.sorted_order.resize(dim);
  std::iota(profile.sorted_order.begin(), profile.sorted_order.end(), 0u);
  std::stable_sort(profile.sorted_order.begin(), profile.sorted_order.end(),
                   [&](std::uint32_t a, std::uint32_t b) {
                     return profile.avg_nsc[a] < profile.avg_nsc[b];
                   });
  return profile;
}

namespace {

BandPartition from_cuts(const FrequencyProfile& profile, std::uint32_t c1,
                        std::uint32_t c2) {
  BandPartition bands;
  bands.cut_low = c1;
  bands.cut_high = c2;
  const std::size_t dim = profile.dim();
  for (std::size_t pos = 0; pos < dim; ++pos) {
    std::uint32_t original = profile.sorted_order[pos];
    if (pos < c1) {
      bands.low.push_back(original);
    } else if (pos < c2) {
      bands.mid.push_back(original);
    } else {
      bands.high.push_back(original);
    }
  }
  std::sort(bands.low.begin(), bands.low.end());
  std::sort(bands.mid.begin(), bands.mid.end());
  std::sort(bands.high.begin(), bands.high.end());
  return bands;
}

// Perpendicular distance of (i, y[i]) to the chord (0, y[0])..(L-1, y[L-1]).
double chord_distance(const std::vector<double>& y, std::size_t i) {
  const double dx = static_cast<double>(y.size() - 1);
  const double dy = y.back() - y.front();
  const double num = std::abs(dy * static_cast<double>(i) -
                              dx * (y[i] - y.front()));
  return num / std::hypot(dx, dy);
}

}  // namespace

BandPartition partition_bands(const FrequencyProfile& profile,
                              const BandMethod& method,
                              std::vector<std::string>* warnings) {
  const std::size_t dim = profile.dim();
  if (dim == 0) throw Error::bad_input("partition_bands: empty profile");

  if (method.kind == BandMethod::Manual) {
    if (method.c1 > method.c2 || method.c2 > dim) {
      throw Error::bad_input("partition_bands: manual cuts must satisfy 0 <= c1 <= c2 <= " +
                             std::to_string(dim) + ", got c1=" + std::to_string(method.c1) +
                             " c2=" + std::to_string(method.c2));
    }
    return from_cuts(profile, method.c1, method.c2);
  }

  // Auto elbow on the sorted curve.
  std::vector<double> y(dim);
  for (std::size_t pos = 0; pos < dim; ++pos) {
    y[pos] = profile.avg_nsc[profile.sorted_order[pos]];
  }
  if (dim < 3) {
    if (warnings) warnings->push_back("partition_bands: curve too short for elbows, all dimensions mid");
    return from_cuts(profile, 0, static_cast<std::uint32_t>(dim));
  }

  std::vector<double> dist(dim);
  double max_dist = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    dist[i] = chord_distance(y, i);
    max_dist = std::max(max_dist, dist[i]);
  }
  if (max_dist < 1e-9) {
    if (warnings) {
      warnings->push_back("partition_bands: flat profile, no elbows found; all dimensions mid");
    }
    return from_cuts(profile, 0, static_cast<std::uint32_t>(dim));
  }

  const std::size_t left_end = (dim - 1) / 2;        // left half: [0, left_end]
  const std::size_t right_begin = dim - 1 - left_end;  // right half: [right_begin, dim-1]
  std::size_t c1 = 0;
  for (std::size_t i = 1; i <= left_end; ++i) {
    if (dist[i] > dist[c1]) c1 = i;
  }
  std::size_t c2 = right_begin;
  for (std::size_t i = right_begin + 1; i < dim; ++i) {
    if (dist[i] > dist[c2]) c2 = i;
  }
  return from_cuts(profile, static_cast<std::uint32_t>(c1 + 1),
                   static_cast<std::uint32_t>(c2 + 1));
}

void write_profile_csv(std::ostream& out, const FrequencyProfile& profile,
                       const BandPartition& bands) {
  std::vector<char> band_of(profile.dim(), 'm');
  for (std::uint32_t l : bands.low) band_of[l] = 'l';
  for (std::uint32_t h : bands.high) band_of[h] = 'h';
  out << "dimension,avg_nsc,band\n";
  for (std::size_t pos = 0; pos < profile.dim(); ++pos) {
    const std::uint32_t l = profile.sorted_order[pos];
    const char* band = band_of[l] == 'l' ? "low" : (band_of[l] == 'h' ? "high" : "mid");
    out << l << ',' << profile.avg_nsc[l] << ',' << band << '\n';
  }
}

}  // namespace gwpt::freq_analysis
