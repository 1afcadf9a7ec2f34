#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "lohi/csv.hpp"
#include "lohi/error.hpp"
#include "lohi/fingerprint.hpp"
#include "lohi/morgan.hpp"
#include "lohi/smiles.hpp"

namespace lohi {

enum class DatasetFormat { kSmilesCsv, kFingerprintCsv };

struct Record {
  std::string id;
  std::optional<std::string> smiles;
  Fingerprint fingerprint;
  std::optional<double> value;
  std::optional<int> label;
};

// Which optional columns the dataset carries; used to write splits back in the
// schema they were read with.
struct DatasetSchema {
  DatasetFormat format = DatasetFormat::kSmilesCsv;
  bool has_value = false;
  bool has_label = false;
};

class Dataset {
 public:
  Dataset() = default;

  Dataset(std::vector<Record> records, DatasetSchema schema) : schema_(schema) {
    for (auto& r : records) add(std::move(r));
  }

  void add(Record r) {
    if (!records_.empty() && r.fingerprint.width() != records_.front().fingerprint.width()) {
      throw InputError("mixed fingerprint widths: " + std::to_string(r.fingerprint.width()) +
                       " vs " + std::to_string(records_.front().fingerprint.width()) +
                       " (record '" + r.id + "')");
    }
    if (!ids_.emplace(r.id, records_.size()).second) {
      throw InputError("duplicate id '" + r.id + "'");
    }
    records_.push_back(std::move(r));
  }

  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  const Record& operator[](std::size_t i) const { return records_[i]; }
  const std::vector<Record>& records() const noexcept { return records_; }
  const DatasetSchema& schema() const noexcept { return schema_; }
  std::size_t fingerprint_width() const noexcept {
    return records_.empty() ? 0 : records_.front().fingerprint.width();
  }

  std::vector<Fingerprint> fingerprints() const {
    std::vector<Fingerprint> out;
    out.reserve(records_.size());
    for (const auto& r : records_) out.push_back(r.fingerprint);
    return out;
  }

  std::optional<std::size_t> index_of(const std::string& id) const {
    const auto it = ids_.find(id);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }

  // Subset in the given index order, sharing the schema.
  Dataset subset(std::span<const std::size_t> indices) const {
    Dataset out;
    out.schema_ = schema_;
    for (std::size_t i : indices) out.add(records_.at(i));
    return out;
  }

 private:
  std::vector<Record> records_;
  std::unordered_map<std::string, std::size_t> ids_;
  DatasetSchema schema_;
};

namespace detail {

struct ColumnMap {
  std::optional<std::size_t> id, smiles, fp, value, label, cluster;
};

inline ColumnMap map_columns(const csv::Row& header) {
  ColumnMap m;
  for (std::size_t i = 0; i < header.fields.size(); ++i) {
    const std::string& name = header.fields[i];
    std::optional<std::size_t>* slot = nullptr;
    if (name == "id") slot = &m.id;
    else if (name == "smiles") slot = &m.smiles;
    else if (name == "fp") slot = &m.fp;
    else if (name == "value") slot = &m.value;
    else if (name == "label") slot = &m.label;
    else if (name == "cluster") slot = &m.cluster;
    else throw CsvError(header.line, "unknown column '" + name + "'");
    if (*slot) throw CsvError(header.line, "duplicate column '" + name + "'");
    *slot = i;
  }
  if (!m.id) throw CsvError(header.line, "missing 'id' column");
  return m;
}

}  // namespace detail

// Infers the format from the header: a 'smiles' column means smiles-csv, an
// 'fp' column fingerprint-csv.
inline DatasetFormat detect_format(const std::string& path) {
  const auto rows = csv::parse(csv::read_file(path));
  if (rows.empty()) throw InputError("'" + path + "' is empty");
  const auto cols = detail::map_columns(rows.front());
  if (cols.fp && !cols.smiles) return DatasetFormat::kFingerprintCsv;
  if (cols.smiles && !cols.fp) return DatasetFormat::kSmilesCsv;
  throw CsvError(1, "header must contain exactly one of 'smiles' or 'fp'");
}

inline Dataset parse_dataset(std::string_view text, DatasetFormat format,
                             const FingerprintConfig& fp_config = {}) {
  const auto rows = csv::parse(text);
  if (rows.empty()) throw InputError("dataset is empty (no header)");
  const auto cols = detail::map_columns(rows.front());
  const bool smiles_mode = format == DatasetFormat::kSmilesCsv;
  if (smiles_mode && !cols.smiles) throw CsvError(1, "smiles-csv requires a 'smiles' column");
  if (!smiles_mode && !cols.fp) throw CsvError(1, "fingerprint-csv requires an 'fp' column");

  Dataset ds({}, DatasetSchema{format, cols.value.has_value(), cols.label.has_value()});
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.fields.size() != rows.front().fields.size()) {
      throw CsvError(row.line, "expected " + std::to_string(rows.front().fields.size()) +
                                   " fields, found " + std::to_string(row.fields.size()));
    }
    Record rec;
    rec.id = row.fields[*cols.id];
    if (rec.id.empty()) throw CsvError(row.line, "empty id");
    try {
      if (smiles_mode) {
        rec.smiles = row.fields[*cols.smiles];
        rec.fingerprint = morgan_fingerprint(parse_smiles(*rec.smiles), fp_config);
      } else {
        rec.fingerprint = Fingerprint::from_hex(row.fields[*cols.fp]);
      }
    } catch (const CsvError&) {
      throw;
    } catch (const InputError& e) {
      throw CsvError(row.line, e.what());
    }
    if (cols.value && !row.fields[*cols.value].empty()) {
      rec.value = csv::parse_double(row.fields[*cols.value]);
      if (!rec.value) throw CsvError(row.line, "invalid value '" + row.fields[*cols.value] + "'");
    }
    if (cols.label && !row.fields[*cols.label].empty()) {
      const std::string& l = row.fields[*cols.label];
      if (l != "0" && l != "1") throw CsvError(row.line, "label must be 0 or 1, got '" + l + "'");
      rec.label = l == "1" ? 1 : 0;
    }
    try {
      ds.add(std::move(rec));
    } catch (const InputError& e) {
      throw CsvError(row.line, e.what());
    }
  }
  return ds;
}

inline Dataset load_dataset(const std::string& path, DatasetFormat format,
                            const FingerprintConfig& fp_config = {}) {
  return parse_dataset(csv::read_file(path), format, fp_config);
}

inline Dataset load_dataset(const std::string& path, const FingerprintConfig& fp_config = {}) {
  return load_dataset(path, detect_format(path), fp_config);
}

// Writes `indices` of `ds` in the dataset's own schema. A per-row cluster
// label, when given, adds a trailing 'cluster' column.
inline void write_dataset(std::ostream& out, const Dataset& ds, std::span<const std::size_t> indices,
                          const std::vector<std::string>* clusters = nullptr) {
  const DatasetSchema& s = ds.schema();
  const bool smiles = s.format == DatasetFormat::kSmilesCsv;
  std::vector<std::string> header{"id", smiles ? "smiles" : "fp"};
  if (s.has_value) header.push_back("value");
  if (s.has_label) header.push_back("label");
  if (clusters) header.push_back("cluster");
  csv::write_row(out, header);
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const Record& r = ds[indices[k]];
    std::vector<std::string> row{r.id, smiles ? r.smiles.value_or("") : r.fingerprint.to_hex()};
    if (s.has_value) row.push_back(r.value ? csv::format_double(*r.value) : "");
    if (s.has_label) row.push_back(r.label ? std::to_string(*r.label) : "");
    if (clusters) row.push_back(clusters->at(k));
    csv::write_row(out, row);
  }
}

inline void write_dataset(std::ostream& out, const Dataset& ds) {
  std::vector<std::size_t> all(ds.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  write_dataset(out, ds, all);
}

// Fingerprint-csv rendering of any dataset (used by the `fingerprint` command).
inline void write_fingerprint_csv(std::ostream& out, const Dataset& ds) {
  const DatasetSchema& s = ds.schema();
  std::vector<std::string> header{"id", "fp"};
  if (s.has_value) header.push_back("value");
  if (s.has_label) header.push_back("label");
  csv::write_row(out, header);
  for (const Record& r : ds.records()) {
    std::vector<std::string> row{r.id, r.fingerprint.to_hex()};
    if (s.has_value) row.push_back(r.value ? csv::format_double(*r.value) : "");
    if (s.has_label) row.push_back(r.label ? std::to_string(*r.label) : "");
    csv::write_row(out, row);
  }
}

}  // namespace lohi
