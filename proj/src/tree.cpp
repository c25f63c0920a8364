#include "rulescore/tree.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "rulescore/error.hpp"

namespace rulescore {

std::size_t DecisionTree::num_leaves() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

std::size_t DecisionTree::max_depth() const {
  std::size_t depth = 0;
  for (const TreeNode& n : nodes) depth = std::max(depth, n.depth);
  return depth;
}

double DecisionTree::predict(Observation x) const {
  if (nodes.empty()) throw Error(ErrorCode::InvalidArgument, "predict on an empty tree");
  std::size_t idx = 0;
  while (!nodes[idx].is_leaf()) {
    const TreeNode& n = nodes[idx];
    bool go_left = condition_holds(branch_condition(n, true), x);
    idx = static_cast<std::size_t>(go_left ? n.left : n.right);
  }
  return nodes[idx].value;
}

Condition DecisionTree::branch_condition(const TreeNode& parent, bool left) const {
  const FeatureInfo& info = schema[parent.feature];
  if (info.kind == FeatureKind::Continuous) {
    return left ? Condition{parent.feature, Interval{-kInf, parent.threshold}}
                : Condition{parent.feature, Interval{parent.threshold, kInf}};
  }
  auto code = static_cast<std::size_t>(parent.threshold);
  if (code >= info.levels.size()) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("split on unknown level {} of feature {}", code, parent.feature));
  }
  MemberOf m;
  if (left) {
    m.categories.push_back(info.levels[code]);
  } else {
    for (std::size_t i = 0; i < info.levels.size(); ++i) {
      if (i != code) m.categories.push_back(info.levels[i]);
    }
    std::sort(m.categories.begin(), m.categories.end());
  }
  return Condition{parent.feature, std::move(m)};
}

std::vector<Conditions> DecisionTree::node_paths() const {
  std::vector<Conditions> paths(nodes.size());
  // Children always follow their parent in `nodes`.
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const TreeNode& n = nodes[i];
    if (n.is_leaf()) continue;
    for (bool left : {true, false}) {
      auto child = static_cast<std::size_t>(left ? n.left : n.right);
      paths[child] = paths[i];
      paths[child].push_back(branch_condition(n, left));
    }
  }
  return paths;
}

RuleSet tree_to_rules(const DecisionTree& tree) {
  if (tree.nodes.empty()) throw Error(ErrorCode::InvalidArgument, "tree has no leaf");
  RuleSet rs;
  rs.task = tree.task;
  rs.classes = tree.classes;
  rs.default_prediction = tree.nodes.front().value;
  if (tree.nodes.front().is_leaf()) return rs;

  auto paths = tree.node_paths();
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    if (!tree.nodes[i].is_leaf()) continue;
    rs.rules.push_back(Rule{canonicalize_conditions(paths[i], &tree.schema), tree.nodes[i].value});
  }
  return rs;
}

}  // namespace rulescore
