#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "lohi/coarsen.hpp"
#include "lohi/dataset.hpp"
#include "lohi/error.hpp"
#include "lohi/kcut.hpp"
#include "lohi/manifest.hpp"
#include "lohi/random.hpp"
#include "lohi/simgraph.hpp"

namespace lohi {

inline constexpr double kDefaultThreshold = 0.4;
inline constexpr double kDefaultSlack = 0.9;

struct HiSplitParams {
  double threshold = kDefaultThreshold;
  int k = 3;
  // Explicit per-partition lower bounds in molecules; overrides fractions.
  std::optional<std::vector<Weight>> bounds;
  // Target share per partition; empty means 1/k each.
  std::vector<double> fractions;
  double slack = kDefaultSlack;
  // Coarsening similarity cut; defaults to `threshold`.
  std::optional<double> theta;
  std::optional<std::chrono::milliseconds> time_budget;
  std::optional<std::uint64_t> node_limit;
  unsigned threads = 1;
  std::uint64_t seed = 0;
};

// b_i = floor(fraction_i * n * slack).
inline std::vector<Weight> default_bounds(std::size_t n, const std::vector<double>& fractions,
                                          double slack) {
  std::vector<Weight> b;
  b.reserve(fractions.size());
  for (double f : fractions) {
    b.push_back(static_cast<Weight>(std::floor(f * static_cast<double>(n) * slack)));
  }
  return b;
}

inline std::vector<double> resolve_fractions(const HiSplitParams& p) {
  if (p.fractions.empty()) return std::vector<double>(static_cast<std::size_t>(p.k), 1.0 / p.k);
  if (p.fractions.size() != static_cast<std::size_t>(p.k)) {
    throw InputError("expected " + std::to_string(p.k) + " fractions");
  }
  for (double f : p.fractions) {
    if (!(f > 0)) throw InputError("fractions must be positive");
  }
  return p.fractions;
}

// Fold i tests on subset i and trains on the union of the others.
inline std::vector<Fold> make_folds(const std::vector<std::vector<std::size_t>>& subsets) {
  if (subsets.size() < 2) throw InputError("fold rotation needs at least two subsets");
  std::vector<Fold> folds;
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    Fold f;
    f.test = subsets[i];
    std::sort(f.test.begin(), f.test.end());
    for (std::size_t j = 0; j < subsets.size(); ++j) {
      if (j != i) f.train.insert(f.train.end(), subsets[j].begin(), subsets[j].end());
    }
    std::sort(f.train.begin(), f.train.end());
    folds.push_back(std::move(f));
  }
  return folds;
}

// Unit-weight problem over the molecule graph, used to re-verify expanded
// coarse solutions.
inline KCutProblem molecule_level_problem(const SimGraph& g, int k, std::vector<Weight> bounds) {
  KCutProblem p;
  p.graph.weight.assign(g.size(), 1);
  p.graph.adjacency.resize(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) {
    for (const Neighbor& nb : g.neighbors(v)) p.graph.adjacency[v].push_back(nb.index);
  }
  p.k = k;
  p.bounds = std::move(bounds);
  return p;
}

struct HiSplitResult {
  SplitManifest manifest;
  std::vector<int> assignment;  // per molecule, 0 = removed, 1..k = subset
  CoarseGraph coarse;
  KCutSolution coarse_solution;
};

// Neighborhood graph -> coarsening -> balanced k-cut on clusters -> expansion
// and molecule-level verification. Subsets are relabeled by descending size.
inline HiSplitResult hi_split_detailed(const Dataset& ds, const HiSplitParams& params,
                                       const KCutSolver& solver = BranchAndBoundSolver{}) {
  if (ds.empty()) throw InputError("dataset is empty");
  if (params.k < 2) throw InputError("k must be >= 2");
  const std::size_t n = ds.size();
  const auto fps = ds.fingerprints();
  const SimGraph graph = build_neighborhood_graph(fps, params.threshold, {true, params.threads});
  const double theta = params.theta.value_or(params.threshold);

  HiSplitResult out;
  out.coarse = coarse_graph(graph, theta);

  const std::vector<double> fractions = params.bounds ? std::vector<double>{} : resolve_fractions(params);
  std::vector<Weight> bounds = params.bounds ? *params.bounds : default_bounds(n, fractions, params.slack);

  KCutProblem problem;
  problem.graph = WeightedGraph::from_coarse(out.coarse);
  problem.k = params.k;
  problem.bounds = bounds;
  problem.time_budget = params.time_budget;
  problem.node_limit = params.node_limit;
  try {
    out.coarse_solution = solver.solve(problem);
  } catch (const InfeasibleError& e) {
    throw InfeasibleError(std::string(e.what()) +
                          "; lower the partition bounds (fractions, slack or explicit bounds) "
                          "or raise the similarity threshold");
  }

  std::vector<int> assignment = expand_assignment(out.coarse, out.coarse_solution.assignment);
  KCutSolution molecule_solution;
  molecule_solution.assignment = assignment;
  molecule_solution.kept_weight = static_cast<Weight>(
      std::count_if(assignment.begin(), assignment.end(), [](int a) { return a != 0; }));
  const auto report = verify_kcut(molecule_level_problem(graph, params.k, bounds), molecule_solution);
  if (!report.ok()) {
    throw std::logic_error("expanded split violates molecule-level constraints: " +
                           report.violations.front().message);
  }

  // Relabel partitions by descending size, ties by original label.
  std::vector<std::size_t> sizes(static_cast<std::size_t>(params.k) + 1, 0);
  for (int a : assignment) ++sizes[a];
  std::vector<int> order(params.k);
  std::iota(order.begin(), order.end(), 1);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return sizes[a] > sizes[b]; });
  std::vector<int> relabel(static_cast<std::size_t>(params.k) + 1, 0);
  for (int i = 0; i < params.k; ++i) relabel[order[i]] = i + 1;
  for (int& a : assignment) a = relabel[a];

  SplitManifest& m = out.manifest;
  m.kind = "hi";
  m.subsets.assign(params.k, {});
  for (std::size_t v = 0; v < n; ++v) {
    if (assignment[v] == 0) m.removed.push_back(v);
    else m.subsets[assignment[v] - 1].push_back(v);
  }
  m.folds = make_folds(m.subsets);
  m.parameters = {{"threshold", params.threshold},
                  {"edge_rule", ">="},
                  {"k", params.k},
                  {"bounds", bounds},
                  {"slack", params.slack},
                  {"coarsen_theta", theta},
                  {"seed", params.seed}};
  if (!fractions.empty()) m.parameters["fractions"] = fractions;
  if (params.time_budget) m.parameters["time_budget_ms"] = params.time_budget->count();
  if (params.node_limit) m.parameters["node_limit"] = *params.node_limit;
  m.solver = {{"backend", solver.name()},
              {"coarse_nodes", out.coarse.size()},
              {"coarse_edges", problem.graph.edges().size()},
              {"kept_weight", out.coarse_solution.kept_weight},
              {"removed_weight", static_cast<Weight>(n) - out.coarse_solution.kept_weight},
              {"optimal", out.coarse_solution.optimal},
              {"gap", out.coarse_solution.gap}};
  out.assignment = std::move(assignment);
  return out;
}

inline SplitManifest hi_split(const Dataset& ds, const HiSplitParams& params) {
  return hi_split_detailed(ds, params).manifest;
}

struct GreedySplitParams {
  double threshold = kDefaultThreshold;
  double test_fraction = 0.1;
  std::uint64_t seed = 0;
};

// Baseline: seeded random partition at the requested test fraction, then every
// test molecule with similarity >= threshold to any train molecule is dropped.
inline SplitManifest greedy_split(const Dataset& ds, const GreedySplitParams& params) {
  if (!(params.test_fraction > 0 && params.test_fraction < 1)) {
    throw InputError("test fraction must be in (0, 1)");
  }
  if (ds.empty()) throw InputError("dataset is empty");
  const std::size_t n = ds.size();
  std::size_t n_test = static_cast<std::size_t>(std::llround(params.test_fraction * static_cast<double>(n)));
  if (n >= 2) n_test = std::clamp<std::size_t>(n_test, 1, n - 1);

  const auto perm = seeded_permutation(n, params.seed);
  std::vector<bool> is_test(n, false);
  for (std::size_t i = 0; i < n_test; ++i) is_test[perm[i]] = true;

  SplitManifest m;
  m.kind = "greedy";
  Fold fold;
  for (std::size_t v = 0; v < n; ++v) {
    if (!is_test[v]) fold.train.push_back(v);
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (!is_test[v]) continue;
    bool leaks = false;
    for (std::size_t t : fold.train) {
      if (tanimoto(ds[v].fingerprint, ds[t].fingerprint) >= params.threshold) {
        leaks = true;
        break;
      }
    }
    (leaks ? m.removed : fold.test).push_back(v);
  }
  m.folds.push_back(std::move(fold));
  m.parameters = {{"threshold", params.threshold},
                  {"edge_rule", ">="},
                  {"test_fraction", params.test_fraction},
                  {"seed", params.seed},
                  {"initial_partition", "seeded-random (substitute for scaffold split)"}};
  return m;
}

}  // namespace lohi
