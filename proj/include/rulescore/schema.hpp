#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace rulescore {

enum class TaskKind { Regression, Classification };

enum class FeatureKind { Continuous, Categorical };

std::string to_string(TaskKind task);
std::optional<TaskKind> parse_task(const std::string& text);

struct FeatureInfo {
  std::string name;
  FeatureKind kind = FeatureKind::Continuous;
  // Sorted category labels; empty for continuous features.
  std::vector<std::string> levels;

  bool operator==(const FeatureInfo&) const = default;
};

/// Feature metadata shared by a dataset and the models fitted on it.
struct Schema {
  std::vector<FeatureInfo> features;

  std::size_t size() const { return features.size(); }
  const FeatureInfo& operator[](std::size_t f) const { return features.at(f); }

  bool operator==(const Schema&) const = default;
};

// Sorts labels numerically when every label parses as a number, else
// lexicographically. Duplicates are removed.
std::vector<std::string> sort_labels(std::vector<std::string> labels);

}  // namespace rulescore
