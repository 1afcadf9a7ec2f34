#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lohi/dataset.hpp"
#include "lohi/version.hpp"

namespace lohi {

struct Fold {
  std::vector<std::size_t> train;  // dataset indices, ascending
  std::vector<std::size_t> test;
};

// One extracted lead-optimization cluster: the center is kept in train as the
// anchor, every other member goes to test.
struct LoClusterEntry {
  std::size_t center = 0;
  std::vector<std::size_t> members;  // includes the center, ascending
  double value_std = 0;
};

// Train/test membership plus provenance. Indices refer to the dataset the
// split was computed on; ids are resolved when serializing.
struct SplitManifest {
  std::string kind;  // "hi", "greedy" or "lo"
  std::vector<Fold> folds;
  std::vector<std::size_t> removed;
  std::vector<std::vector<std::size_t>> subsets;       // hi: F_1..F_k
  std::vector<std::vector<LoClusterEntry>> clusters;   // lo: per fold
  nlohmann::json parameters = nlohmann::json::object();
  nlohmann::json solver = nlohmann::json::object();

  nlohmann::json to_json(const Dataset& ds) const {
    auto ids = [&](const std::vector<std::size_t>& idx) {
      nlohmann::json a = nlohmann::json::array();
      for (std::size_t i : idx) a.push_back(ds[i].id);
      return a;
    };
    nlohmann::json j;
    j["format_version"] = kManifestFormatVersion;
    j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
    j["kind"] = kind;
    j["parameters"] = parameters;
    j["n_molecules"] = ds.size();
    j["removed"] = ids(removed);
    nlohmann::json folds_json = nlohmann::json::array();
    for (const Fold& f : folds) folds_json.push_back({{"train", ids(f.train)}, {"test", ids(f.test)}});
    j["folds"] = folds_json;
    if (!subsets.empty()) {
      nlohmann::json s = nlohmann::json::array();
      for (const auto& sub : subsets) s.push_back(ids(sub));
      j["subsets"] = s;
    }
    if (!clusters.empty()) {
      nlohmann::json per_fold = nlohmann::json::array();
      for (const auto& fold_clusters : clusters) {
        nlohmann::json list = nlohmann::json::array();
        for (std::size_t c = 0; c < fold_clusters.size(); ++c) {
          const LoClusterEntry& e = fold_clusters[c];
          std::vector<std::size_t> test_members;
          for (std::size_t m : e.members) {
            if (m != e.center) test_members.push_back(m);
          }
          list.push_back({{"cluster", c},
                          {"anchor", ds[e.center].id},
                          {"test_members", ids(test_members)},
                          {"value_std", e.value_std}});
        }
        per_fold.push_back(list);
      }
      j["clusters"] = per_fold;
    }
    if (!solver.empty()) j["solver"] = solver;
    return j;
  }
};

}  // namespace lohi
