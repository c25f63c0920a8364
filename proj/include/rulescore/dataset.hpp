#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rulescore/rules.hpp"
#include "rulescore/schema.hpp"

namespace rulescore {

/// Column-major tabular data with a designated target.
///
/// Continuous feature values are stored as-is. Categorical features and
/// classification targets are stored as codes indexing the sorted label
/// lists held in the schema (or in `classes` for the target).
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::string name, Schema schema, std::vector<std::vector<double>> columns,
          std::string target_name, TaskKind task, std::vector<double> target,
          std::vector<std::string> classes = {});

  const std::string& name() const { return name_; }
  const Schema& schema() const { return schema_; }
  const std::string& target_name() const { return target_name_; }
  TaskKind task() const { return task_; }
  const std::vector<std::string>& classes() const { return classes_; }

  std::size_t rows() const { return target_.size(); }
  std::size_t features() const { return columns_.size(); }

  std::span<const double> column(std::size_t f) const { return columns_.at(f); }
  std::span<const double> target() const { return target_; }

  /// Row i as feature values (labels for categorical features).
  std::vector<FeatureValue> observation(std::size_t i) const;

  /// Rows selected by index; repeated indices produce repeated rows.
  Dataset subset(std::span<const std::size_t> indices) const;

  /// Copy with a replaced column, keeping schema and target.
  Dataset with_column(std::size_t f, std::vector<double> values) const;

  void rename(std::string name) { name_ = std::move(name); }

 private:
  std::string name_;
  Schema schema_;
  std::vector<std::vector<double>> columns_;
  std::string target_name_;
  TaskKind task_ = TaskKind::Regression;
  std::vector<double> target_;
  std::vector<std::string> classes_;
};

struct CsvOptions {
  // Target column; the last column when empty.
  std::string target;
  // Force the task; inferred from the target column when unset
  // (numeric -> regression, otherwise classification).
  std::optional<TaskKind> task;
  // Columns declared categorical even if numeric.
  std::vector<std::string> categorical;
  char delimiter = ',';
};

/// RFC-4180 CSV with a header row. Empty cells and "NA" are missing values
/// and rejected. Throws ParseError, MissingValues, UnknownTarget, IoError.
Dataset load_csv(const std::string& path, const CsvOptions& options);
Dataset parse_csv(const std::string& text, const CsvOptions& options, const std::string& name = "inline");

}  // namespace rulescore
