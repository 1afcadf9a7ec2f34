#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "lohi/dataset.hpp"
#include "lohi/error.hpp"
#include "lohi/manifest.hpp"
#include "lohi/random.hpp"
#include "lohi/simgraph.hpp"

namespace lohi {

// Experimental-noise floors for intracluster activity spread.
inline constexpr double kStdThresholdPKi = 0.60;
inline constexpr double kStdThresholdPIC50 = 0.70;

struct LoSplitParams {
  double threshold = 0.4;  // t: similarity to the cluster center
  std::size_t min_size = 5;  // m: neighbor count (center included) must exceed this
  std::size_t max_clusters = std::numeric_limits<std::size_t>::max();  // M
  double std_threshold = kStdThresholdPKi;  // std_t
  // 0 scans candidates in index order; other seeds permute the tie-break order.
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct LoSelection {
  std::vector<LoClusterEntry> clusters;
  std::vector<std::size_t> remaining;  // ascending
};

inline double population_std(const std::vector<double>& v) {
  if (v.empty()) return 0;
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size()));
}

// Repeatedly extracts the qualifying molecule with the fewest pool neighbors
// (similarity >= t, itself included) together with those neighbors. A
// molecule qualifies when its neighbor count exceeds m and the population std
// of the values over that neighborhood exceeds std_t.
inline LoSelection select_distinct_clusters(const Dataset& ds, const LoSplitParams& params) {
  if (!(params.threshold > 0 && params.threshold <= 1)) throw InputError("t must be in (0, 1]");
  if (params.min_size < 2) throw InputError("minimum cluster size must be >= 2");
  if (!(params.std_threshold >= 0)) throw InputError("std threshold must be >= 0");
  const std::size_t n = ds.size();
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!ds[i].value) throw InputError("record '" + ds[i].id + "' has no activity value");
    values[i] = *ds[i].value;
  }
  const auto fps = ds.fingerprints();
  const SimGraph graph = build_neighborhood_graph(fps, params.threshold, {true, params.threads});
  std::vector<std::size_t> scan(n);
  std::iota(scan.begin(), scan.end(), 0);
  if (params.seed != 0) scan = seeded_permutation(n, params.seed);

  LoSelection out;
  std::vector<bool> in_pool(n, true);
  std::vector<double> neighborhood;
  while (out.clusters.size() < params.max_clusters) {
    std::size_t best = n;
    std::size_t least = std::numeric_limits<std::size_t>::max();
    double best_std = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t v = scan[i];
      if (!in_pool[v]) continue;
      neighborhood.assign(1, values[v]);
      for (const Neighbor& nb : graph.neighbors(v)) {
        if (in_pool[nb.index]) neighborhood.push_back(values[nb.index]);
      }
      const std::size_t count = neighborhood.size();
      if (count <= params.min_size || count >= least) continue;
      const double s = population_std(neighborhood);
      if (s > params.std_threshold) {
        best = v;
        least = count;
        best_std = s;
      }
    }
    if (best == n) break;
    LoClusterEntry cluster;
    cluster.center = best;
    cluster.value_std = best_std;
    cluster.members.push_back(best);
    for (const Neighbor& nb : graph.neighbors(best)) {
      if (in_pool[nb.index]) cluster.members.push_back(nb.index);
    }
    std::sort(cluster.members.begin(), cluster.members.end());
    for (std::size_t v : cluster.members) in_pool[v] = false;
    out.clusters.push_back(std::move(cluster));
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (in_pool[v]) out.remaining.push_back(v);
  }
  return out;
}

inline Fold lo_fold(const LoSelection& sel) {
  Fold f;
  f.train = sel.remaining;
  for (const LoClusterEntry& c : sel.clusters) {
    f.train.push_back(c.center);
    for (std::size_t m : c.members) {
      if (m != c.center) f.test.push_back(m);
    }
  }
  std::sort(f.train.begin(), f.train.end());
  return f;
}

// One fold per seed; each fold keeps every cluster center in train as anchor
// and tests on the remaining members, grouped by cluster.
inline SplitManifest get_lo_split(const Dataset& ds, const LoSplitParams& params,
                                  const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw InputError("at least one seed is required");
  SplitManifest m;
  m.kind = "lo";
  for (std::uint64_t seed : seeds) {
    LoSplitParams p = params;
    p.seed = seed;
    LoSelection sel = select_distinct_clusters(ds, p);
    m.folds.push_back(lo_fold(sel));
    m.clusters.push_back(std::move(sel.clusters));
  }
  m.parameters = {{"threshold", params.threshold},
                  {"similarity_rule", ">="},
                  {"min_size", params.min_size},
                  {"std_threshold", params.std_threshold},
                  {"std_includes_center", true},
                  {"seeds", seeds}};
  if (params.max_clusters != std::numeric_limits<std::size_t>::max()) {
    m.parameters["max_clusters"] = params.max_clusters;
  } else {
    m.parameters["max_clusters"] = nullptr;
  }
  return m;
}

inline SplitManifest get_lo_split(const Dataset& ds, const LoSplitParams& params) {
  return get_lo_split(ds, params, {params.seed});
}

}  // namespace lohi
