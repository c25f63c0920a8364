#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "rulescore/dataset.hpp"
#include "rulescore/tree.hpp"

namespace rulescore {

struct CartParams {
  std::size_t max_leaf_nodes = 20;
  std::size_t min_samples_leaf = 1;
  // 0 means unlimited.
  std::size_t max_depth = 0;
  // Features drawn per split; 0 means all. Sampling is driven by `seed`.
  std::size_t max_features = 0;
  std::uint64_t seed = 0;
};

/// Best split of one node, as found by the exhaustive search.
struct SplitCandidate {
  std::size_t feature = 0;
  double threshold = 0.0;
  // Impurity decrease in total (sample-weighted) units: sum of squared
  // errors for regression, n * Gini for classification.
  double gain = 0.0;
};

/// Exhaustive best split of `rows` over `features`, or nullopt when no split
/// leaves both children with at least `min_samples_leaf` rows and a
/// positive gain. Ties go to the lower feature index, then lower threshold.
std::optional<SplitCandidate> best_split(const Dataset& data, std::span<const std::size_t> rows,
                                         std::span<const std::size_t> features, std::size_t min_samples_leaf);

/// Best-first CART: grows the leaf with the largest impurity decrease until
/// max_leaf_nodes leaves exist or no admissible split remains. Continuous
/// thresholds are midpoints between consecutive distinct values; categorical
/// splits isolate one level against the rest. No pruning.
/// Throws EmptyData, InvalidArgument.
DecisionTree fit_cart(const Dataset& data, const CartParams& params);

/// Mean target (regression) or majority class with smallest-code tie-break.
double leaf_value(std::span<const double> targets, TaskKind task);

}  // namespace rulescore
