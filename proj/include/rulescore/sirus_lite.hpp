#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rulescore/dataset.hpp"
#include "rulescore/discretize.hpp"
#include "rulescore/rules.hpp"

namespace rulescore {

struct SirusLiteParams {
  std::size_t n_trees = 100;
  std::size_t max_depth = 3;
  // Minimum fraction of trees a rule must appear in.
  double p0 = 0.05;
  std::size_t q = kDefaultBins;
  std::size_t max_rules = 10;
  // Features drawn per split; 0 means max(1, d/3).
  std::size_t max_features = 0;
  std::uint64_t seed = 0;
};

struct SirusLiteFit {
  RuleSet rules;
  // Fraction of trees containing each kept rule, aligned with rules.rules.
  std::vector<double> frequencies;
  // Set when no rule reached p0; `rules` is then empty.
  bool no_rule_selected = false;
};

/// Redundancy-based rule selection from a forest of shallow trees grown on
/// quantile-binned features:
///  1. bin continuous features on the q-grid fitted to `data`;
///  2. grow n_trees depth-limited trees on bootstrap resamples, tree t seeded
///     with seed + t;
///  3. read one rule off every non-root node, thresholds mapped back to cuts;
///  4. keep rules found in at least a fraction p0 of trees, most frequent
///     first (ties by canonical form), at most max_rules;
///  5. predict with the mean target or majority class of each rule's
///     activation set in `data`.
/// Throws EmptyData, InvalidArgument.
SirusLiteFit fit_sirus_lite(const Dataset& data, const SirusLiteParams& params);

}  // namespace rulescore
