#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "lohi/csv.hpp"
#include "lohi/error.hpp"

namespace lohi {

struct PredictionRow {
  std::string id;
  double truth = 0;
  double score = 0;
  std::optional<std::string> cluster;
};

struct PredictionTable {
  std::vector<PredictionRow> rows;

  bool has_clusters() const {
    return !rows.empty() &&
           std::all_of(rows.begin(), rows.end(), [](const PredictionRow& r) { return r.cluster.has_value(); });
  }
};

// Prediction CSV: `id,truth,score[,cluster]`.
inline PredictionTable parse_predictions(std::string_view text) {
  const auto rows = csv::parse(text);
  if (rows.empty()) throw InputError("prediction table is empty");
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < rows[0].fields.size(); ++i) {
    if (!col.emplace(rows[0].fields[i], i).second) {
      throw CsvError(1, "duplicate column '" + rows[0].fields[i] + "'");
    }
  }
  for (const char* name : {"id", "truth", "score"}) {
    if (!col.count(name)) throw CsvError(1, std::string("missing '") + name + "' column");
  }
  const bool has_cluster = col.count("cluster") > 0;
  PredictionTable t;
  std::unordered_set<std::string> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r].fields;
    if (f.size() != rows[0].fields.size()) throw CsvError(rows[r].line, "wrong field count");
    PredictionRow row;
    row.id = f[col["id"]];
    if (!seen.insert(row.id).second) throw CsvError(rows[r].line, "duplicate id '" + row.id + "'");
    const auto truth = csv::parse_double(f[col["truth"]]);
    const auto score = csv::parse_double(f[col["score"]]);
    if (!truth || !score) throw CsvError(rows[r].line, "truth and score must be numbers");
    row.truth = *truth;
    row.score = *score;
    if (has_cluster) row.cluster = f[col["cluster"]];
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline PredictionTable load_predictions(const std::string& path) {
  return parse_predictions(csv::read_file(path));
}

// Average precision: sum over descending score groups of
// (recall_i - recall_{i-1}) * precision_i. Tied scores enter as one step.
inline double pr_auc(const PredictionTable& table) {
  std::size_t positives = 0;
  for (const auto& r : table.rows) {
    if (r.truth != 0 && r.truth != 1) throw InputError("PR AUC needs binary truth, got " + csv::format_double(r.truth));
    positives += r.truth == 1 ? 1 : 0;
  }
  if (positives == 0 || positives == table.rows.size()) {
    throw InputError("PR AUC needs at least one positive and one negative");
  }
  std::vector<std::size_t> order(table.rows.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return table.rows[a].score > table.rows[b].score;
  });
  double ap = 0;
  double prev_recall = 0;
  std::size_t tp = 0;
  std::size_t seen = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double s = table.rows[order[i]].score;
    std::size_t j = i;
    for (; j < order.size() && table.rows[order[j]].score == s; ++j) {
      tp += table.rows[order[j]].truth == 1 ? 1 : 0;
    }
    seen += j - i;
    const double recall = static_cast<double>(tp) / static_cast<double>(positives);
    const double precision = static_cast<double>(tp) / static_cast<double>(seen);
    ap += (recall - prev_recall) * precision;
    prev_recall = recall;
    i = j;
  }
  return ap;
}

// 1-based ranks with ties sharing their average rank.
inline std::vector<double> average_ranks(const std::vector<double>& x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && x[order[j]] == x[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j + 1);  // mean of ranks i+1..j
    for (std::size_t t = i; t < j; ++t) ranks[order[t]] = avg;
    i = j;
  }
  return ranks;
}

// Pearson correlation of average ranks; 0 when the predictions are constant.
inline double spearman(const std::vector<double>& truth, const std::vector<double>& pred) {
  if (truth.size() != pred.size() || truth.size() < 2) {
    throw InputError("Spearman correlation needs at least two paired values");
  }
  const auto rt = average_ranks(truth);
  const auto rp = average_ranks(pred);
  const double n = static_cast<double>(truth.size());
  const double mt = std::accumulate(rt.begin(), rt.end(), 0.0) / n;
  const double mp = std::accumulate(rp.begin(), rp.end(), 0.0) / n;
  double cov = 0, vt = 0, vp = 0;
  for (std::size_t i = 0; i < rt.size(); ++i) {
    cov += (rt[i] - mt) * (rp[i] - mp);
    vt += (rt[i] - mt) * (rt[i] - mt);
    vp += (rp[i] - mp) * (rp[i] - mp);
  }
  if (vt == 0) throw InputError("Spearman correlation is undefined for constant truth");
  if (vp == 0) return 0.0;
  return std::clamp(cov / std::sqrt(vt * vp), -1.0, 1.0);
}

struct ClusterSpearman {
  std::map<std::string, double> per_cluster;
  double mean = 0;
};

// Spearman within each cluster, averaged over clusters (ordered by cluster id).
inline ClusterSpearman cluster_spearman(const PredictionTable& table) {
  if (table.rows.empty()) throw InputError("prediction table is empty");
  if (!table.has_clusters()) throw InputError("every prediction row needs a cluster");
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> groups;
  for (const auto& r : table.rows) {
    auto& g = groups[*r.cluster];
    g.first.push_back(r.truth);
    g.second.push_back(r.score);
  }
  ClusterSpearman out;
  double sum = 0;
  for (const auto& [cluster, g] : groups) {
    double rho;
    try {
      rho = spearman(g.first, g.second);
    } catch (const InputError& e) {
      throw InputError("cluster '" + cluster + "': " + e.what());
    }
    out.per_cluster[cluster] = rho;
    sum += rho;
  }
  out.mean = sum / static_cast<double>(groups.size());
  return out;
}

inline double mean_cluster_spearman(const PredictionTable& table) {
  return cluster_spearman(table).mean;
}

enum class MetricMode { kHi, kLo };

// Score of a model that predicts one constant for every molecule.
inline double dummy_baseline(const PredictionTable& table, MetricMode mode) {
  PredictionTable constant = table;
  for (auto& r : constant.rows) r.score = 0.0;
  return mode == MetricMode::kHi ? pr_auc(constant) : mean_cluster_spearman(constant);
}

}  // namespace lohi
