#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rulescore/rules.hpp"
#include "rulescore/schema.hpp"

namespace rulescore {

struct TreeNode {
  static constexpr std::int32_t kNone = -1;

  std::int32_t left = kNone;
  std::int32_t right = kNone;
  std::size_t feature = 0;
  // Continuous split: x <= threshold goes left.
  // Categorical split: the level with code `threshold` goes left, the rest right.
  double threshold = 0.0;
  double value = 0.0;
  std::size_t depth = 0;
  std::size_t samples = 0;

  bool is_leaf() const { return left == kNone; }
};

/// Binary decision tree; node 0 is the root.
struct DecisionTree {
  Schema schema;
  TaskKind task = TaskKind::Regression;
  std::vector<std::string> classes;
  std::vector<TreeNode> nodes;

  std::size_t num_leaves() const;
  std::size_t max_depth() const;

  /// Value of the leaf reached by x.
  double predict(Observation x) const;

  /// Conditions routing a sample from `parent` into `child`.
  Condition branch_condition(const TreeNode& parent, bool left) const;

  /// Raw (unmerged) root-to-node condition lists, one per node index.
  std::vector<Conditions> node_paths() const;
};

/// One canonical rule per leaf. A single-leaf tree yields an empty rule set
/// whose default prediction is the leaf value.
RuleSet tree_to_rules(const DecisionTree& tree);

}  // namespace rulescore
