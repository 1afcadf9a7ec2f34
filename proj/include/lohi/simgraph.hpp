#pragma once

#include <algorithm>
#include <cstddef>
#include <ostream>
#include <span>
#include <thread>
#include <utility>
#include <vector>

#include "lohi/csv.hpp"
#include "lohi/error.hpp"
#include "lohi/fingerprint.hpp"

namespace lohi {

struct Neighbor {
  std::size_t index = 0;
  double similarity = 0;
};

// Undirected similarity graph. Neighbor lists are sorted by index; every edge
// has similarity >= threshold and appears in both endpoint lists.
class SimGraph {
 public:
  SimGraph() = default;

  SimGraph(std::vector<std::vector<Neighbor>> adjacency, double threshold)
      : adjacency_(std::move(adjacency)), threshold_(threshold) {
    for (auto& list : adjacency_) {
      std::sort(list.begin(), list.end(),
                [](const Neighbor& a, const Neighbor& b) { return a.index < b.index; });
    }
  }

  // Builds a graph from an explicit edge list; used by tests and tools that
  // already know the similarities.
  static SimGraph from_edges(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> edges,
                             std::span<const double> similarity, double threshold) {
    if (edges.size() != similarity.size()) throw InputError("edge/similarity length mismatch");
    std::vector<std::vector<Neighbor>> adj(n);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const auto [u, v] = edges[e];
      if (u >= n || v >= n || u == v) throw InputError("invalid edge in similarity graph");
      adj[u].push_back({v, similarity[e]});
      adj[v].push_back({u, similarity[e]});
    }
    return SimGraph(std::move(adj), threshold);
  }

  std::size_t size() const noexcept { return adjacency_.size(); }
  double threshold() const noexcept { return threshold_; }
  const std::vector<Neighbor>& neighbors(std::size_t v) const { return adjacency_.at(v); }
  std::size_t degree(std::size_t v) const { return adjacency_.at(v).size(); }

  std::size_t edge_count() const {
    std::size_t twice = 0;
    for (const auto& l : adjacency_) twice += l.size();
    return twice / 2;
  }

  bool has_edge(std::size_t u, std::size_t v) const {
    const auto& l = adjacency_.at(u);
    auto it = std::lower_bound(l.begin(), l.end(), v,
                               [](const Neighbor& a, std::size_t x) { return a.index < x; });
    return it != l.end() && it->index == v;
  }

  // `u,v,similarity` rows with u < v.
  void write_edge_list(std::ostream& out) const {
    out << "u,v,similarity\n";
    for (std::size_t u = 0; u < adjacency_.size(); ++u) {
      for (const Neighbor& nb : adjacency_[u]) {
        if (nb.index > u) out << u << ',' << nb.index << ',' << csv::format_double(nb.similarity) << '\n';
      }
    }
  }

 private:
  std::vector<std::vector<Neighbor>> adjacency_;
  double threshold_ = 0;
};

struct GraphBuildOptions {
  // Skip pairs whose popcounts alone bound the similarity below threshold.
  bool popcount_filter = true;
  unsigned threads = 1;
};

// Exact all-pairs construction: edge (u, v) iff tanimoto(u, v) >= threshold.
// Rows are split across threads in contiguous blocks and merged in row order,
// so the result does not depend on the thread count.
inline SimGraph build_neighborhood_graph(std::span<const Fingerprint> fps, double threshold,
                                         const GraphBuildOptions& opts = {}) {
  if (!(threshold > 0 && threshold <= 1)) throw InputError("threshold must be in (0, 1]");
  const std::size_t n = fps.size();
  for (std::size_t i = 1; i < n; ++i) {
    if (fps[i].width() != fps[0].width()) throw InputError("fingerprint width mismatch");
  }

  // Row u holds pairs (u, v) with v > u.
  std::vector<std::vector<Neighbor>> upper(n);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t u = begin; u < end; ++u) {
      const double pu = static_cast<double>(fps[u].popcount());
      for (std::size_t v = u + 1; v < n; ++v) {
        if (opts.popcount_filter) {
          const double pv = static_cast<double>(fps[v].popcount());
          const double hi = std::max(pu, pv);
          // tanimoto <= min/max popcount
          if (hi == 0 || std::min(pu, pv) / hi < threshold) continue;
        }
        const double s = tanimoto(fps[u], fps[v]);
        if (s >= threshold) upper[u].push_back({v, s});
      }
    }
  };

  const unsigned threads = n < 2 ? 1u : std::max(1u, opts.threads);
  if (threads == 1) {
    work(0, n);
  } else {
    // Balance the triangular workload: row u costs ~ n - u.
    std::vector<std::size_t> cuts{0};
    const double total = 0.5 * static_cast<double>(n) * static_cast<double>(n);
    double acc = 0;
    for (std::size_t u = 0; u < n && cuts.size() < threads; ++u) {
      acc += static_cast<double>(n - u);
      if (acc >= total * static_cast<double>(cuts.size()) / threads) cuts.push_back(u + 1);
    }
    cuts.push_back(n);
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t + 1 < cuts.size(); ++t) pool.emplace_back(work, cuts[t], cuts[t + 1]);
    for (auto& th : pool) th.join();
  }

  std::vector<std::vector<Neighbor>> adj(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (const Neighbor& nb : upper[u]) {
      adj[u].push_back(nb);
      adj[nb.index].push_back({u, nb.similarity});
    }
  }
  return SimGraph(std::move(adj), threshold);
}

// 0-based component label per vertex, numbered by smallest member index.
inline std::vector<std::size_t> connected_components(const SimGraph& g) {
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> label(g.size(), kUnset);
  std::vector<std::size_t> stack;
  std::size_t next = 0;
  for (std::size_t s = 0; s < g.size(); ++s) {
    if (label[s] != kUnset) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (const Neighbor& nb : g.neighbors(v)) {
        if (label[nb.index] == kUnset) {
          label[nb.index] = next;
          stack.push_back(nb.index);
        }
      }
    }
    ++next;
  }
  return label;
}

}  // namespace lohi
