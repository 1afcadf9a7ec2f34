#pragma once

#include <algorithm>
#include <cstddef>
#include <set>
#include <utility>
#include <vector>

#include "lohi/error.hpp"
#include "lohi/simgraph.hpp"

namespace lohi {

// Cluster-level graph: node c aggregates member_map[c] molecules and weighs
// their count. Edges join distinct clusters that share a molecule-level edge.
struct CoarseGraph {
  std::vector<std::size_t> node_weight;
  std::vector<std::vector<std::size_t>> adjacency;  // sorted, no self-edges
  std::vector<std::vector<std::size_t>> member_map;  // sorted molecule indices
  std::vector<std::size_t> cluster_of;  // molecule -> cluster

  std::size_t size() const noexcept { return node_weight.size(); }
};

struct NeighborCount {
  std::size_t count = 0;
  std::size_t vertex = 0;
};

// Per-vertex number of incident edges with similarity strictly above theta.
inline std::vector<NeighborCount> calculate_neighbors(const SimGraph& g, double theta) {
  if (theta < g.threshold()) throw InputError("coarsening theta must be >= graph threshold");
  std::vector<NeighborCount> out;
  out.reserve(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) {
    std::size_t total = 0;
    for (const Neighbor& nb : g.neighbors(v)) {
      if (nb.similarity > theta) ++total;
    }
    out.push_back({total, v});
  }
  return out;
}

// Descending count, ties by ascending vertex index.
inline void sort_neighbor_counts(std::vector<NeighborCount>& counts) {
  std::sort(counts.begin(), counts.end(), [](const NeighborCount& a, const NeighborCount& b) {
    return a.count != b.count ? a.count > b.count : a.vertex < b.vertex;
  });
}

struct ClusterAssignment {
  std::vector<std::size_t> cluster;  // 1-based cluster id per vertex
  std::size_t total_clusters = 1;    // one past the last id, as in the sweep
};

// Greedy sweep in the given order: an unassigned vertex founds a cluster and
// captures its still-unassigned neighbors with similarity above theta.
inline ClusterAssignment cluster_nodes(const std::vector<NeighborCount>& sorted_counts,
                                       const SimGraph& g, double theta) {
  constexpr std::size_t kUnset = 0;
  ClusterAssignment out;
  out.cluster.assign(g.size(), kUnset);
  for (const NeighborCount& entry : sorted_counts) {
    const std::size_t v = entry.vertex;
    if (out.cluster[v] != kUnset) continue;
    out.cluster[v] = out.total_clusters;
    for (const Neighbor& nb : g.neighbors(v)) {
      if (nb.similarity > theta && out.cluster[nb.index] == kUnset) {
        out.cluster[nb.index] = out.total_clusters;
      }
    }
    ++out.total_clusters;
  }
  return out;
}

// Collapses clusters into weighted nodes; cluster ids are normalized to
// 0-based (id - 1).
inline CoarseGraph build_coarse_graph(const ClusterAssignment& assignment, const SimGraph& g) {
  if (assignment.cluster.size() != g.size()) throw InputError("assignment does not cover the graph");
  const std::size_t m = assignment.total_clusters - 1;
  CoarseGraph cg;
  cg.node_weight.assign(m, 0);
  cg.member_map.assign(m, {});
  cg.cluster_of.resize(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) {
    const std::size_t id = assignment.cluster[v];
    if (id == 0 || id > m) throw InputError("vertex " + std::to_string(v) + " has no cluster");
    cg.cluster_of[v] = id - 1;
    cg.member_map[id - 1].push_back(v);
    ++cg.node_weight[id - 1];
  }
  cg.adjacency.assign(m, {});
  for (std::size_t c = 0; c < m; ++c) {
    std::set<std::size_t> connected;
    for (std::size_t v : cg.member_map[c]) {
      for (const Neighbor& nb : g.neighbors(v)) {
        const std::size_t other = cg.cluster_of[nb.index];
        if (other != c) connected.insert(other);
      }
    }
    cg.adjacency[c].assign(connected.begin(), connected.end());
  }
  return cg;
}

inline CoarseGraph coarse_graph(const SimGraph& g, double theta) {
  auto counts = calculate_neighbors(g, theta);
  sort_neighbor_counts(counts);
  return build_coarse_graph(cluster_nodes(counts, g, theta), g);
}

// Molecule-level assignment from a cluster-level one.
template <typename T>
std::vector<T> expand_assignment(const CoarseGraph& cg, const std::vector<T>& cluster_values) {
  if (cluster_values.size() != cg.size()) throw InputError("cluster assignment size mismatch");
  std::vector<T> out(cg.cluster_of.size());
  for (std::size_t v = 0; v < out.size(); ++v) out[v] = cluster_values[cg.cluster_of[v]];
  return out;
}

}  // namespace lohi
