#pragma once

#include <array>
#include <cstddef>
#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lohi/dataset.hpp"
#include "lohi/error.hpp"
#include "lohi/fingerprint.hpp"
#include "lohi/version.hpp"

namespace lohi {

inline constexpr std::size_t kHistogramBins = 20;  // width 0.05 over [0, 1]

struct NearestTrain {
  std::size_t train_index = 0;
  double similarity = 0;
};

struct AuditReport {
  double threshold = 0;
  std::vector<NearestTrain> nearest;  // per test molecule
  std::size_t leaked = 0;             // nearest similarity >= threshold
  double leakage_fraction = 0;
  std::array<std::size_t, kHistogramBins> histogram{};

  // Bin edges are exact multiples of 0.05; the last bin includes 1.0.
  void write_histogram_csv(std::ostream& out) const {
    out << "bin_lo,bin_hi,count\n";
    char buf[64];
    for (std::size_t b = 0; b < kHistogramBins; ++b) {
      std::snprintf(buf, sizeof(buf), "%.2f,%.2f,%zu\n", static_cast<double>(b) * 0.05,
                    static_cast<double>(b + 1) * 0.05, histogram[b]);
      out << buf;
    }
  }
};

// Exact nearest-train similarity for every test molecule. Histogram bins are
// computed from the integer overlap counts, so no value lands in the wrong bin
// through rounding.
inline AuditReport audit_split(std::span<const Fingerprint> train, std::span<const Fingerprint> test,
                               double threshold) {
  if (train.empty() || test.empty()) throw InputError("audit needs non-empty train and test sets");
  AuditReport r;
  r.threshold = threshold;
  r.nearest.reserve(test.size());
  for (const Fingerprint& t : test) {
    NearestTrain best;
    std::size_t best_inter = 0;
    std::size_t best_union = 1;
    for (std::size_t j = 0; j < train.size(); ++j) {
      const OverlapCounts c = overlap_counts(t, train[j]);
      // Exact ratio comparison; an all-zero pair counts as 0/1.
      const std::size_t u = c.union_ == 0 ? 1 : c.union_;
      if (j == 0 || c.intersection * best_union > best_inter * u) {
        best_inter = c.intersection;
        best_union = u;
        best.train_index = j;
      }
    }
    best.similarity = static_cast<double>(best_inter) / static_cast<double>(best_union);
    std::size_t bin = (20 * best_inter) / best_union;
    if (bin >= kHistogramBins) bin = kHistogramBins - 1;
    ++r.histogram[bin];
    if (best.similarity >= threshold) ++r.leaked;
    r.nearest.push_back(best);
  }
  r.leakage_fraction = static_cast<double>(r.leaked) / static_cast<double>(test.size());
  return r;
}

inline nlohmann::json audit_to_json(const AuditReport& r, const Dataset& train, const Dataset& test) {
  nlohmann::json j;
  j["format_version"] = kAuditFormatVersion;
  j["threshold"] = r.threshold;
  j["n_train"] = train.size();
  j["n_test"] = test.size();
  j["n_leaked"] = r.leaked;
  j["leakage_fraction"] = r.leakage_fraction;
  nlohmann::json hist = nlohmann::json::array();
  for (std::size_t b = 0; b < kHistogramBins; ++b) {
    hist.push_back({{"bin", b}, {"count", r.histogram[b]}});
  }
  j["histogram"] = hist;
  nlohmann::json nearest = nlohmann::json::array();
  for (std::size_t i = 0; i < r.nearest.size(); ++i) {
    nearest.push_back({{"test_id", test[i].id},
                       {"nearest_train_id", train[r.nearest[i].train_index].id},
                       {"similarity", r.nearest[i].similarity}});
  }
  j["nearest"] = nearest;
  return j;
}

// Greedy diversity packing in input order: a molecule joins the set when its
// similarity to every member is below threshold. Returns member indices.
inline std::vector<std::size_t> circle_representatives(std::span<const Fingerprint> fps,
                                                       double threshold) {
  if (fps.empty()) throw InputError("circle count needs at least one fingerprint");
  if (!(threshold > 0 && threshold <= 1)) throw InputError("threshold must be in (0, 1]");
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < fps.size(); ++i) {
    bool far = true;
    for (std::size_t r : reps) {
      if (tanimoto(fps[i], fps[r]) >= threshold) {
        far = false;
        break;
      }
    }
    if (far) reps.push_back(i);
  }
  return reps;
}

inline std::size_t n_circles(std::span<const Fingerprint> fps, double threshold) {
  return circle_representatives(fps, threshold).size();
}

}  // namespace lohi
