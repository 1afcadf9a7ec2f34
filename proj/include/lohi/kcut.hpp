#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "lohi/coarsen.hpp"
#include "lohi/error.hpp"
#include "lohi/version.hpp"

namespace lohi {

using Weight = std::int64_t;

// Vertex-weighted simple undirected graph.
struct WeightedGraph {
  std::vector<Weight> weight;
  std::vector<std::vector<std::size_t>> adjacency;  // sorted

  std::size_t size() const noexcept { return weight.size(); }

  static WeightedGraph from_edges(std::vector<Weight> weights,
                                  const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    WeightedGraph g;
    g.weight = std::move(weights);
    g.adjacency.assign(g.weight.size(), {});
    for (const auto& [u, v] : edges) {
      if (u >= g.size() || v >= g.size()) throw InputError("edge endpoint out of range");
      if (u == v) throw InputError("self-loop on vertex " + std::to_string(u));
      g.adjacency[u].push_back(v);
      g.adjacency[v].push_back(u);
    }
    for (std::size_t v = 0; v < g.size(); ++v) {
      auto& l = g.adjacency[v];
      std::sort(l.begin(), l.end());
      if (std::adjacent_find(l.begin(), l.end()) != l.end()) {
        throw InputError("duplicate edge at vertex " + std::to_string(v));
      }
    }
    return g;
  }

  static WeightedGraph from_coarse(const CoarseGraph& cg) {
    WeightedGraph g;
    g.weight.assign(cg.node_weight.begin(), cg.node_weight.end());
    g.adjacency = cg.adjacency;
    return g;
  }

  std::vector<std::pair<std::size_t, std::size_t>> edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t u = 0; u < size(); ++u) {
      for (std::size_t v : adjacency[u]) {
        if (v > u) out.emplace_back(u, v);
      }
    }
    return out;
  }

  Weight total_weight() const { return std::accumulate(weight.begin(), weight.end(), Weight{0}); }
};

// Keep as much vertex weight as possible in k partitions such that no edge
// joins two different partitions and partition i weighs at least bounds[i].
struct KCutProblem {
  WeightedGraph graph;
  int k = 2;
  std::vector<Weight> bounds;
  std::optional<std::chrono::milliseconds> time_budget;
  // Deterministic alternative to the wall-clock budget: search nodes explored.
  std::optional<std::uint64_t> node_limit;

  void validate() const {
    if (k < 2) throw InputError("k must be >= 2");
    if (bounds.size() != static_cast<std::size_t>(k)) {
      throw InputError("expected " + std::to_string(k) + " bounds, got " +
                       std::to_string(bounds.size()));
    }
    for (Weight b : bounds) {
      if (b < 0) throw InputError("bounds must be non-negative");
    }
    for (Weight w : graph.weight) {
      if (w < 1) throw InputError("vertex weights must be >= 1");
    }
    if (graph.adjacency.size() != graph.weight.size()) throw InputError("malformed graph");
  }

  Weight bound_sum() const { return std::accumulate(bounds.begin(), bounds.end(), Weight{0}); }
};

// assignment[v] is 0 for removed vertices, otherwise the partition in 1..k.
struct KCutSolution {
  std::vector<int> assignment;
  Weight kept_weight = 0;
  bool optimal = false;
  Weight gap = 0;  // upper bound minus kept_weight; 0 when optimal
  std::uint64_t nodes = 0;

  std::vector<Weight> partition_weights(const WeightedGraph& g, int k) const {
    std::vector<Weight> w(static_cast<std::size_t>(k) + 1, 0);
    for (std::size_t v = 0; v < assignment.size(); ++v) {
      if (assignment[v] >= 0 && assignment[v] <= k) w[assignment[v]] += g.weight[v];
    }
    return w;
  }
};

struct KCutViolation {
  enum class Kind {
    kShape,          // assignment length or value out of range (one partition per vertex)
    kCrossEdge,      // edge between two different kept partitions
    kPartitionBound, // partition weight below its lower bound
    kObjective,      // kept_weight does not match the assignment
  };
  Kind kind;
  std::string message;
};

struct KCutReport {
  std::vector<KCutViolation> violations;
  bool ok() const noexcept { return violations.empty(); }
  explicit operator bool() const noexcept { return ok(); }
};

// Checks every constraint family and lists each violation; never throws.
inline KCutReport verify_kcut(const KCutProblem& p, const KCutSolution& s) {
  KCutReport r;
  using K = KCutViolation::Kind;
  const auto& g = p.graph;
  if (s.assignment.size() != g.size()) {
    r.violations.push_back({K::kShape, "assignment has " + std::to_string(s.assignment.size()) +
                                           " entries for " + std::to_string(g.size()) + " vertices"});
    return r;
  }
  bool shape_ok = true;
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (s.assignment[v] < 0 || s.assignment[v] > p.k) {
      shape_ok = false;
      r.violations.push_back({K::kShape, "vertex " + std::to_string(v) + " has partition " +
                                             std::to_string(s.assignment[v]) + " outside 0.." +
                                             std::to_string(p.k)});
    }
  }
  if (!shape_ok) return r;
  for (std::size_t u = 0; u < g.size(); ++u) {
    for (std::size_t v : g.adjacency[u]) {
      if (v <= u) continue;
      const int a = s.assignment[u];
      const int b = s.assignment[v];
      if (a != 0 && b != 0 && a != b) {
        r.violations.push_back({K::kCrossEdge, "edge (" + std::to_string(u) + "," +
                                                   std::to_string(v) + ") joins partitions " +
                                                   std::to_string(a) + " and " + std::to_string(b)});
      }
    }
  }
  const auto w = s.partition_weights(g, p.k);
  Weight kept = 0;
  for (int i = 1; i <= p.k; ++i) {
    kept += w[i];
    const Weight bound = static_cast<std::size_t>(i - 1) < p.bounds.size() ? p.bounds[i - 1] : 0;
    if (w[i] < bound) {
      r.violations.push_back({K::kPartitionBound, "partition " + std::to_string(i) + " weighs " +
                                                      std::to_string(w[i]) + " < bound " +
                                                      std::to_string(bound)});
    }
  }
  if (kept != s.kept_weight) {
    r.violations.push_back({K::kObjective, "kept_weight " + std::to_string(s.kept_weight) +
                                               " but assignment keeps " + std::to_string(kept)});
  }
  return r;
}

inline constexpr std::uint64_t kDefaultBruteForceCap = 10'000'000;

// Exhaustive oracle over all (k+1)^n assignments. The first maximum in
// odometer order (vertex 0 least significant) is returned.
inline KCutSolution brute_force_kcut(const KCutProblem& p,
                                     std::uint64_t cap = kDefaultBruteForceCap) {
  p.validate();
  const std::size_t n = p.graph.size();
  const std::uint64_t base = static_cast<std::uint64_t>(p.k) + 1;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (total > cap / base) throw InputError("instance too large for brute force");
    total *= base;
  }
  if (total > cap) throw InputError("instance too large for brute force");

  const auto edges = p.graph.edges();
  std::vector<int> a(n, 0);
  std::optional<KCutSolution> best;
  std::vector<Weight> w(base, 0);
  for (std::uint64_t iter = 0; iter < total; ++iter) {
    std::fill(w.begin(), w.end(), 0);
    for (std::size_t v = 0; v < n; ++v) w[a[v]] += p.graph.weight[v];
    bool ok = true;
    for (int i = 1; i <= p.k && ok; ++i) ok = w[i] >= p.bounds[i - 1];
    for (std::size_t e = 0; e < edges.size() && ok; ++e) {
      const int x = a[edges[e].first];
      const int y = a[edges[e].second];
      ok = x == 0 || y == 0 || x == y;
    }
    if (ok) {
      const Weight kept = p.graph.total_weight() - w[0];
      if (!best || kept > best->kept_weight) best = KCutSolution{a, kept, true, 0, iter + 1};
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (++a[v] < static_cast<int>(base)) break;
      a[v] = 0;
    }
  }
  if (!best) throw InfeasibleError("no assignment satisfies the partition bounds");
  best->nodes = total;
  return *best;
}

namespace detail {

// Components among `active` vertices, each sorted; listed by smallest vertex.
inline std::vector<std::vector<std::size_t>> active_components(const WeightedGraph& g,
                                                               const std::vector<bool>& active) {
  std::vector<std::vector<std::size_t>> comps;
  std::vector<bool> seen(g.size(), false);
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < g.size(); ++s) {
    if (!active[s] || seen[s]) continue;
    comps.emplace_back();
    seen[s] = true;
    stack.push_back(s);
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      comps.back().push_back(v);
      for (std::size_t u : g.adjacency[v]) {
        if (active[u] && !seen[u]) {
          seen[u] = true;
          stack.push_back(u);
        }
      }
    }
    std::sort(comps.back().begin(), comps.back().end());
  }
  return comps;
}

inline int most_deficient(const std::vector<Weight>& part_weight, const std::vector<Weight>& bounds) {
  int best = 1;
  for (int i = 2; i < static_cast<int>(part_weight.size()); ++i) {
    if (bounds[i - 1] - part_weight[i] > bounds[best - 1] - part_weight[best]) best = i;
  }
  return best;
}

}  // namespace detail

namespace detail {

// Re-admits removed vertices that no longer bridge two partitions, then
// packages the assignment as a solution.
inline KCutSolution finish_heuristic(const KCutProblem& p, std::vector<int> assignment) {
  const auto& g = p.graph;
  const std::size_t n = g.size();
  std::vector<Weight> part(static_cast<std::size_t>(p.k) + 1, 0);
  for (std::size_t v = 0; v < n; ++v) part[assignment[v]] += g.weight[v];
  std::vector<std::size_t> removed;
  for (std::size_t v = 0; v < n; ++v) {
    if (assignment[v] == 0) removed.push_back(v);
  }
  std::stable_sort(removed.begin(), removed.end(),
                   [&](std::size_t a, std::size_t b) { return g.weight[a] > g.weight[b]; });
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t v : removed) {
      if (assignment[v] != 0) continue;
      int seen = 0;
      bool conflict = false;
      for (std::size_t u : g.adjacency[v]) {
        const int a = assignment[u];
        if (a == 0) continue;
        if (seen == 0) seen = a;
        else if (seen != a) conflict = true;
      }
      if (conflict) continue;
      const int target = seen != 0 ? seen : most_deficient(part, p.bounds);
      assignment[v] = target;
      part[target] += g.weight[v];
      changed = true;
    }
  }
  KCutSolution s;
  s.assignment = std::move(assignment);
  Weight removed_weight = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (s.assignment[v] == 0) removed_weight += g.weight[v];
  }
  s.kept_weight = g.total_weight() - removed_weight;
  s.optimal = false;
  s.gap = removed_weight;
  return s;
}

inline Weight weight_of(const WeightedGraph& g, const std::vector<std::size_t>& vs) {
  Weight w = 0;
  for (std::size_t v : vs) w += g.weight[v];
  return w;
}

// Component packing: whole components go, heaviest first, to the partition
// furthest below its bound; while bounds stay unmet the heaviest splittable
// component loses its highest-degree vertices until it fractures.
inline std::optional<std::vector<int>> pack_components(const KCutProblem& p) {
  const auto& g = p.graph;
  const std::size_t n = g.size();
  std::vector<bool> active(n, true);
  std::vector<int> assignment(n, 0);
  std::vector<Weight> part(static_cast<std::size_t>(p.k) + 1, 0);

  while (true) {
    auto comps = active_components(g, active);
    std::vector<Weight> cw(comps.size());
    for (std::size_t i = 0; i < comps.size(); ++i) cw[i] = weight_of(g, comps[i]);
    std::vector<std::size_t> order(comps.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return cw[a] > cw[b]; });

    std::fill(part.begin(), part.end(), 0);
    std::fill(assignment.begin(), assignment.end(), 0);
    for (std::size_t c : order) {
      const int target = most_deficient(part, p.bounds);
      for (std::size_t v : comps[c]) assignment[v] = target;
      part[target] += cw[c];
    }
    bool met = true;
    for (int i = 1; i <= p.k; ++i) met = met && part[i] >= p.bounds[i - 1];
    if (met) return assignment;

    const auto split = std::find_if(order.begin(), order.end(),
                                    [&](std::size_t c) { return comps[c].size() >= 2; });
    if (split == order.end()) return std::nullopt;
    std::vector<std::size_t> rest = comps[*split];
    while (rest.size() >= 2) {
      std::size_t victim = rest.front();
      std::size_t victim_degree = 0;
      for (std::size_t v : rest) {
        std::size_t d = 0;
        for (std::size_t u : g.adjacency[v]) d += active[u] ? 1 : 0;
        if (d > victim_degree) {
          victim = v;
          victim_degree = d;
        }
      }
      active[victim] = false;
      rest.erase(std::find(rest.begin(), rest.end(), victim));
      std::vector<bool> mask(n, false);
      for (std::size_t v : rest) mask[v] = true;
      if (active_components(g, mask).size() >= 2) break;
    }
  }
}

// Farthest vertex from `from` by BFS inside `mask`; a cheap pseudo-peripheral
// vertex when applied twice.
inline std::size_t farthest_from(const WeightedGraph& g, const std::vector<char>& mask, std::size_t from) {
  std::vector<char> seen(g.size(), 0);
  std::vector<std::size_t> queue{from};
  seen[from] = 1;
  std::size_t last = from;
  for (std::size_t h = 0; h < queue.size(); ++h) {
    last = queue[h];
    for (std::size_t u : g.adjacency[last]) {
      if (mask[u] && !seen[u]) {
        seen[u] = 1;
        queue.push_back(u);
      }
    }
  }
  return last;
}

// Region growing: every partition except the one with the largest bound is
// carved out of the unassigned graph, first from whole components that fit,
// then by growing a region from a peripheral vertex and removing its frontier.
// The growth step prefers vertices that add the least new frontier. The
// remaining vertices form the last partition.
inline std::optional<std::vector<int>> grow_regions(const KCutProblem& p, std::size_t variant) {
  const auto& g = p.graph;
  const std::size_t n = g.size();
  constexpr int kFree = -1;
  std::vector<int> assignment(n, kFree);
  std::vector<int> parts(p.k);
  std::iota(parts.begin(), parts.end(), 1);
  std::stable_sort(parts.begin(), parts.end(),
                   [&](int a, int b) { return p.bounds[a - 1] < p.bounds[b - 1]; });
  const int last = parts.back();
  parts.pop_back();

  for (int part : parts) {
    Weight have = 0;
    while (have < p.bounds[part - 1]) {
      const Weight need = p.bounds[part - 1] - have;
      std::vector<bool> free_mask(n);
      for (std::size_t v = 0; v < n; ++v) free_mask[v] = assignment[v] == kFree;
      const auto comps = active_components(g, free_mask);
      if (comps.empty()) return std::nullopt;
      std::optional<std::size_t> fits, grow;
      Weight fits_w = 0, grow_w = 0;
      for (std::size_t c = 0; c < comps.size(); ++c) {
        const Weight w = weight_of(g, comps[c]);
        if (w <= need && (!fits || w > fits_w)) fits = c, fits_w = w;
        if (w > need && (!grow || w < grow_w)) grow = c, grow_w = w;
      }
      if (fits) {
        for (std::size_t v : comps[*fits]) assignment[v] = part;
        have += fits_w;
        continue;
      }
      const auto& comp = comps[*grow];
      std::vector<char> mask(n, 0);
      for (std::size_t v : comp) mask[v] = 1;
      std::size_t start = farthest_from(g, mask, comp[variant % comp.size()]);
      if (variant % 2 == 1) start = farthest_from(g, mask, start);

      // Frontier holds free vertices adjacent to the region.
      std::vector<char> in_front(n, 0);
      std::vector<std::size_t> frontier{start};
      in_front[start] = 1;
      while (have < p.bounds[part - 1] && !frontier.empty()) {
        std::size_t pick = 0;
        std::size_t best_new = std::numeric_limits<std::size_t>::max();
        for (std::size_t i = 0; i < frontier.size(); ++i) {
          std::size_t fresh = 0;
          for (std::size_t u : g.adjacency[frontier[i]]) fresh += mask[u] && !in_front[u] ? 1 : 0;
          if (fresh < best_new) best_new = fresh, pick = i;
        }
        const std::size_t v = frontier[pick];
        frontier.erase(frontier.begin() + static_cast<std::ptrdiff_t>(pick));
        assignment[v] = part;
        have += g.weight[v];
        for (std::size_t u : g.adjacency[v]) {
          if (mask[u] && !in_front[u]) {
            in_front[u] = 1;
            frontier.push_back(u);
          }
        }
      }
      for (std::size_t v : frontier) assignment[v] = 0;
    }
  }
  Weight rest = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (assignment[v] == kFree) {
      assignment[v] = last;
      rest += g.weight[v];
    }
  }
  if (rest < p.bounds[last - 1]) return std::nullopt;
  return assignment;
}

}  // namespace detail

// Best of two constructive heuristics, component packing and region growing
// from several start vertices, each followed by a re-admission pass for
// removed vertices whose kept neighbors share a single partition. Returns
// nullopt when neither reaches the bounds.
inline std::optional<KCutSolution> try_greedy_kcut(const KCutProblem& p) {
  p.validate();
  if (p.bound_sum() > p.graph.total_weight()) return std::nullopt;
  std::optional<KCutSolution> best;
  auto consider = [&](std::optional<std::vector<int>> a) {
    if (!a) return;
    KCutSolution s = detail::finish_heuristic(p, std::move(*a));
    if (!best || s.kept_weight > best->kept_weight) best = std::move(s);
  };
  consider(detail::pack_components(p));
  for (std::size_t variant = 0; variant < 8; ++variant) consider(detail::grow_regions(p, variant));
  return best;
}

inline KCutSolution greedy_kcut(const KCutProblem& p) {
  auto s = try_greedy_kcut(p);
  if (!s) throw InfeasibleError("greedy k-cut could not satisfy the partition bounds");
  return *s;
}

namespace detail {

// Depth-first branch and bound over vertices in static order (weight desc,
// degree desc, index asc). Each vertex's domain follows from its assigned
// neighbors: two distinct kept partitions force removal, one partition p
// leaves {p, removed}. Nodes are pruned when
//   kept + keepable unassigned weight - conflict matching <= incumbent,
// or when some partition cannot reach its bound with the weight still able to
// join it. Empty partitions with equal bounds are interchangeable, so only the
// first of them is tried.
class KCutSearch {
 public:
  explicit KCutSearch(const KCutProblem& p)
      : p_(p),
        g_(p.graph),
        n_(g_.size()),
        k_(p.k),
        assign_(n_, kUnassigned),
        nb_count_(n_ * (static_cast<std::size_t>(k_) + 1), 0),
        distinct_(n_, 0),
        unassigned_nbrs_(n_, 0),
        part_(static_cast<std::size_t>(k_) + 1, 0),
        potential_(static_cast<std::size_t>(k_) + 1, 0),
        matched_(n_, 0) {
    order_.resize(n_);
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      if (g_.weight[a] != g_.weight[b]) return g_.weight[a] > g_.weight[b];
      return g_.adjacency[a].size() > g_.adjacency[b].size();
    });
    for (std::size_t v = 0; v < n_; ++v) unassigned_nbrs_[v] = g_.adjacency[v].size();
    keepable_ = g_.total_weight();
  }

  void seed(const KCutSolution& incumbent) {
    best_ = incumbent.assignment;
    best_kept_ = incumbent.kept_weight;
  }

  // Returns false if the time budget interrupted the search.
  bool run() {
    if (p_.time_budget) deadline_ = std::chrono::steady_clock::now() + *p_.time_budget;
    root_bound_ = node_bound();
    dfs(0);
    return !aborted_;
  }

  bool has_incumbent() const noexcept { return best_.has_value(); }
  Weight root_bound() const noexcept { return root_bound_; }
  std::uint64_t nodes() const noexcept { return nodes_; }

  KCutSolution result(bool complete) const {
    KCutSolution s;
    s.assignment = *best_;
    s.kept_weight = best_kept_;
    s.optimal = complete;
    s.gap = complete ? 0 : std::max<Weight>(0, root_bound_ - best_kept_);
    s.nodes = nodes_;
    return s;
  }

 private:
  static constexpr int kUnassigned = -1;

  int& nb(std::size_t v, int part) { return nb_count_[v * (k_ + 1) + part]; }
  int nb(std::size_t v, int part) const { return nb_count_[v * (k_ + 1) + part]; }

  int single_partition(std::size_t v) const {
    for (int i = 1; i <= k_; ++i) {
      if (nb(v, i) > 0) return i;
    }
    return 0;
  }

  void assign(std::size_t v, int part) {
    if (distinct_[v] < 2) keepable_ -= g_.weight[v];
    assign_[v] = part;
    part_[part] += g_.weight[v];
    for (std::size_t u : g_.adjacency[v]) {
      --unassigned_nbrs_[u];
      if (part == 0) continue;
      if (nb(u, part)++ == 0) {
        if (++distinct_[u] == 2 && assign_[u] == kUnassigned) keepable_ -= g_.weight[u];
      }
    }
    if (part != 0) kept_ += g_.weight[v];
  }

  void unassign(std::size_t v) {
    const int part = assign_[v];
    for (std::size_t u : g_.adjacency[v]) {
      ++unassigned_nbrs_[u];
      if (part == 0) continue;
      if (--nb(u, part) == 0) {
        if (distinct_[u]-- == 2 && assign_[u] == kUnassigned) keepable_ += g_.weight[u];
      }
    }
    if (part != 0) kept_ -= g_.weight[v];
    part_[part] -= g_.weight[v];
    assign_[v] = kUnassigned;
    if (distinct_[v] < 2) keepable_ += g_.weight[v];
  }

  // Upper bound on the kept weight reachable from this node, or -1 when some
  // partition can no longer reach its bound.
  Weight node_bound() {
    std::fill(potential_.begin(), potential_.end(), 0);
    Weight universal = 0;
    for (std::size_t pos = depth_; pos < n_; ++pos) {
      const std::size_t v = order_[pos];
      if (distinct_[v] == 0) universal += g_.weight[v];
      else if (distinct_[v] == 1) potential_[single_partition(v)] += g_.weight[v];
    }
    Weight deficit_sum = 0;
    for (int i = 1; i <= k_; ++i) {
      const Weight deficit = p_.bounds[i - 1] - part_[i];
      if (deficit <= 0) continue;
      if (deficit > universal + potential_[i]) return -1;
      deficit_sum += deficit;
    }
    if (deficit_sum > keepable_) return -1;

    // Disjoint edges between unassigned vertices confined to different single
    // partitions: one endpoint of each must be removed.
    ++stamp_;
    Weight lost = 0;
    for (std::size_t pos = depth_; pos < n_; ++pos) {
      const std::size_t v = order_[pos];
      if (distinct_[v] != 1 || matched_[v] == stamp_) continue;
      const int pv = single_partition(v);
      for (std::size_t u : g_.adjacency[v]) {
        if (assign_[u] != kUnassigned || distinct_[u] != 1 || matched_[u] == stamp_) continue;
        if (single_partition(u) == pv) continue;
        matched_[v] = matched_[u] = stamp_;
        lost += std::min(g_.weight[v], g_.weight[u]);
        break;
      }
    }
    return kept_ + keepable_ - lost;
  }

  bool out_of_time() {
    if (p_.node_limit && nodes_ > *p_.node_limit) aborted_ = true;
    if (deadline_ && (nodes_ & 1023) == 0 && std::chrono::steady_clock::now() >= *deadline_) {
      aborted_ = true;
    }
    return aborted_;
  }

  void dfs(std::size_t pos) {
    if (aborted_) return;
    ++nodes_;
    if (out_of_time()) return;
    depth_ = pos;
    if (pos == n_) {
      for (int i = 1; i <= k_; ++i) {
        if (part_[i] < p_.bounds[i - 1]) return;
      }
      if (!best_ || kept_ > best_kept_) {
        best_ = assign_;
        best_kept_ = kept_;
      }
      return;
    }
    const Weight bound = node_bound();
    if (bound < 0) return;
    if (best_ && bound <= best_kept_) return;

    const std::size_t v = order_[pos];
    int candidates[64];
    int count = 0;
    const bool isolated_now = unassigned_nbrs_[v] == 0;
    if (distinct_[v] >= 2) {
      candidates[count++] = 0;
    } else if (distinct_[v] == 1) {
      candidates[count++] = single_partition(v);
      if (!isolated_now) candidates[count++] = 0;
    } else {
      // Largest deficit first; lowest index on ties.
      std::vector<int> parts;
      for (int i = 1; i <= k_; ++i) {
        bool symmetric_duplicate = false;
        if (part_[i] == 0) {
          for (int j = 1; j < i; ++j) {
            if (part_[j] == 0 && p_.bounds[j - 1] == p_.bounds[i - 1]) symmetric_duplicate = true;
          }
        }
        if (!symmetric_duplicate) parts.push_back(i);
      }
      std::stable_sort(parts.begin(), parts.end(), [&](int a, int b) {
        return p_.bounds[a - 1] - part_[a] > p_.bounds[b - 1] - part_[b];
      });
      bool satisfied_taken = false;
      for (int i : parts) {
        const bool satisfied = p_.bounds[i - 1] - part_[i] <= 0;
        // With no unassigned neighbors, satisfied partitions are interchangeable.
        if (isolated_now && satisfied) {
          if (satisfied_taken) continue;
          satisfied_taken = true;
        }
        if (count < 63) candidates[count++] = i;
      }
      if (!isolated_now) candidates[count++] = 0;
    }

    for (int c = 0; c < count && !aborted_; ++c) {
      assign(v, candidates[c]);
      dfs(pos + 1);
      unassign(v);
      depth_ = pos;
    }
  }

  const KCutProblem& p_;
  const WeightedGraph& g_;
  std::size_t n_;
  int k_;
  std::vector<std::size_t> order_;
  std::vector<int> assign_;
  std::vector<int> nb_count_;
  std::vector<int> distinct_;
  std::vector<std::size_t> unassigned_nbrs_;
  std::vector<Weight> part_;
  std::vector<Weight> potential_;
  std::vector<std::uint64_t> matched_;
  std::uint64_t stamp_ = 0;
  Weight kept_ = 0;
  Weight keepable_ = 0;  // unassigned weight not yet forced out
  std::size_t depth_ = 0;
  std::optional<std::vector<int>> best_;
  Weight best_kept_ = 0;
  Weight root_bound_ = 0;
  std::uint64_t nodes_ = 0;
  std::optional<std::chrono::steady_clock::time_point> deadline_;
  bool aborted_ = false;
};

}  // namespace detail

// Exact solver seeded with the greedy incumbent. Under a time budget the best
// incumbent is returned with optimal=false and a gap against the root bound.
inline KCutSolution solve_balanced_kcut(const KCutProblem& p) {
  p.validate();
  if (p.k > 62) throw InputError("k above 62 is not supported");
  if (p.bound_sum() > p.graph.total_weight()) {
    throw InfeasibleError("sum of partition bounds (" + std::to_string(p.bound_sum()) +
                          ") exceeds total weight (" + std::to_string(p.graph.total_weight()) + ")");
  }
  detail::KCutSearch search(p);
  if (auto greedy = try_greedy_kcut(p)) search.seed(*greedy);
  const bool complete = search.run();
  if (!search.has_incumbent()) {
    if (!complete) throw TimeBudgetError("time budget exhausted before a feasible solution was found");
    throw InfeasibleError("no assignment satisfies the partition bounds");
  }
  return search.result(complete);
}

// Pluggable backend seam; the branch-and-bound engine is the reference.
class KCutSolver {
 public:
  virtual ~KCutSolver() = default;
  virtual KCutSolution solve(const KCutProblem& p) const = 0;
  virtual const char* name() const noexcept = 0;
};

class BranchAndBoundSolver final : public KCutSolver {
 public:
  KCutSolution solve(const KCutProblem& p) const override { return solve_balanced_kcut(p); }
  const char* name() const noexcept override { return "branch-and-bound"; }
};

class BruteForceSolver final : public KCutSolver {
 public:
  explicit BruteForceSolver(std::uint64_t cap = kDefaultBruteForceCap) : cap_(cap) {}
  KCutSolution solve(const KCutProblem& p) const override { return brute_force_kcut(p, cap_); }
  const char* name() const noexcept override { return "brute-force"; }

 private:
  std::uint64_t cap_;
};

class GreedySolver final : public KCutSolver {
 public:
  KCutSolution solve(const KCutProblem& p) const override { return greedy_kcut(p); }
  const char* name() const noexcept override { return "greedy"; }
};

// Problem JSON: {"format_version", "weights": [...], "edges": [[u, v], ...],
// "k", "bounds": [...], optional "time_budget_ms"}.
inline nlohmann::json kcut_problem_to_json(const KCutProblem& p) {
  nlohmann::json j;
  j["format_version"] = kKCutJsonFormatVersion;
  j["weights"] = p.graph.weight;
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [u, v] : p.graph.edges()) edges.push_back({u, v});
  j["edges"] = edges;
  j["k"] = p.k;
  j["bounds"] = p.bounds;
  if (p.time_budget) j["time_budget_ms"] = p.time_budget->count();
  if (p.node_limit) j["node_limit"] = *p.node_limit;
  return j;
}

inline KCutProblem kcut_problem_from_json(const nlohmann::json& j) {
  try {
    KCutProblem p;
    auto weights = j.at("weights").get<std::vector<Weight>>();
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw InputError("each edge must be a [u, v] pair");
      edges.emplace_back(e[0].get<std::size_t>(), e[1].get<std::size_t>());
    }
    p.graph = WeightedGraph::from_edges(std::move(weights), edges);
    p.k = j.at("k").get<int>();
    p.bounds = j.at("bounds").get<std::vector<Weight>>();
    if (j.contains("time_budget_ms")) {
      p.time_budget = std::chrono::milliseconds(j.at("time_budget_ms").get<std::int64_t>());
    }
    if (j.contains("node_limit")) p.node_limit = j.at("node_limit").get<std::uint64_t>();
    p.validate();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed k-cut problem: ") + e.what());
  }
}

inline nlohmann::json kcut_solution_to_json(const KCutProblem& p, const KCutSolution& s) {
  nlohmann::json j;
  j["format_version"] = kKCutJsonFormatVersion;
  j["assignment"] = s.assignment;
  j["kept_weight"] = s.kept_weight;
  j["removed_weight"] = p.graph.total_weight() - s.kept_weight;
  j["optimal"] = s.optimal;
  j["gap"] = s.gap;
  const auto w = s.partition_weights(p.graph, p.k);
  j["partition_weights"] = std::vector<Weight>(w.begin() + 1, w.end());
  return j;
}

}  // namespace lohi
