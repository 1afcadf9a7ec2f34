#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "lohi/csv.hpp"
#include "lohi/dataset.hpp"
#include "lohi/error.hpp"

namespace lohi {

enum class ActivityMode { kBinary, kContinuous };

struct RawActivity {
  std::string smiles;
  double value_nm = 0;  // activity in nM
  std::string relation;  // "=", "<" or ">"
};

// pX = 9 - log10(value in nM).
inline double to_pchembl(double value_nm) {
  if (!(value_nm > 0)) throw InputError("activity value must be positive");
  return 9.0 - std::log10(value_nm);
}

inline constexpr double kActiveThreshold = 6.0;      // pX strictly above is active
inline constexpr double kActiveThresholdNm = 10000.0;  // 10 uM
inline constexpr double kContinuousLow = 5.0;
inline constexpr double kContinuousHigh = 9.0;
inline constexpr double kMaxDuplicateRange = 1.0;

namespace detail {

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace detail

// Cleans raw measurements into a dataset. Binary mode labels pX > 6 as active
// and drops censored rows that cannot be binarized, then drops duplicate-SMILES
// groups with conflicting labels. Continuous mode keeps exact ("=") rows with
// 5 < pX < 9, drops groups whose pX range exceeds 1.0 and takes the median of
// the rest. Records get ids mol_<k> in order of first appearance.
inline Dataset preprocess_activity(const std::vector<RawActivity>& raw, ActivityMode mode,
                                   const FingerprintConfig& fp_config = {}) {
  struct Group {
    std::vector<double> px;
    std::vector<int> labels;
  };
  std::vector<std::string> order;
  std::map<std::string, Group> groups;

  for (const RawActivity& row : raw) {
    if (row.relation != "=" && row.relation != "<" && row.relation != ">") {
      throw InputError("unknown relation '" + row.relation + "'");
    }
    const double px = to_pchembl(row.value_nm);
    int label = 0;
    if (mode == ActivityMode::kBinary) {
      // "<" at or above 10 uM and ">" below 10 uM cannot be placed on one side.
      if (row.relation == "<" && row.value_nm >= kActiveThresholdNm) continue;
      if (row.relation == ">" && row.value_nm < kActiveThresholdNm) continue;
      label = px > kActiveThreshold ? 1 : 0;
    } else {
      if (row.relation != "=") continue;
      if (!(px > kContinuousLow && px < kContinuousHigh)) continue;
    }
    auto [it, inserted] = groups.try_emplace(row.smiles);
    if (inserted) order.push_back(row.smiles);
    it->second.px.push_back(px);
    it->second.labels.push_back(label);
  }

  Dataset ds({}, DatasetSchema{DatasetFormat::kSmilesCsv, true, mode == ActivityMode::kBinary});
  std::size_t next_id = 0;
  for (const std::string& smiles : order) {
    const Group& g = groups.at(smiles);
    Record rec;
    if (mode == ActivityMode::kBinary) {
      const bool conflicting =
          std::any_of(g.labels.begin(), g.labels.end(), [&](int l) { return l != g.labels[0]; });
      if (conflicting) continue;
      rec.label = g.labels[0];
    } else {
      const auto [lo, hi] = std::minmax_element(g.px.begin(), g.px.end());
      if (*hi - *lo > kMaxDuplicateRange) continue;
    }
    rec.value = detail::median(g.px);
    rec.id = "mol_" + std::to_string(next_id++);
    rec.smiles = smiles;
    rec.fingerprint = morgan_fingerprint(parse_smiles(smiles), fp_config);
    ds.add(std::move(rec));
  }
  if (ds.empty()) throw InputError("preprocessing discarded every row");
  return ds;
}

// Raw activity file: header `smiles,value,relation` (value in nM).
inline std::vector<RawActivity> load_raw_activity(const std::string& path) {
  const auto rows = csv::parse(csv::read_file(path));
  if (rows.empty()) throw InputError("'" + path + "' is empty");
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < rows[0].fields.size(); ++i) col[rows[0].fields[i]] = i;
  for (const char* name : {"smiles", "value", "relation"}) {
    if (!col.count(name)) throw CsvError(1, std::string("missing '") + name + "' column");
  }
  std::vector<RawActivity> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r].fields;
    if (f.size() != rows[0].fields.size()) throw CsvError(rows[r].line, "wrong field count");
    const auto v = csv::parse_double(f[col["value"]]);
    if (!v) throw CsvError(rows[r].line, "invalid value '" + f[col["value"]] + "'");
    if (!(*v > 0)) throw CsvError(rows[r].line, "activity value must be positive");
    out.push_back({f[col["smiles"]], *v, f[col["relation"]]});
  }
  return out;
}

}  // namespace lohi
