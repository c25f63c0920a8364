#pragma once

// Generators and brute-force oracles shared by the unit and acceptance
// suites. Nothing here calls into the code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "rulescore/dataset.hpp"
#include "rulescore/rules.hpp"
#include "rulescore/tree.hpp"

namespace rulescore::testing {

inline std::string data_dir() { return RULESCORE_DATA_DIR; }

inline Schema continuous_schema(std::size_t d) {
  Schema s;
  for (std::size_t f = 0; f < d; ++f) s.features.push_back({"X" + std::to_string(f), FeatureKind::Continuous, {}});
  return s;
}

inline Dataset regression_data(std::vector<std::vector<double>> columns, std::vector<double> y,
                               std::string name = "test") {
  Schema s = continuous_schema(columns.size());
  return Dataset(std::move(name), std::move(s), std::move(columns), "y", TaskKind::Regression, std::move(y));
}

inline Dataset classification_data(std::vector<std::vector<double>> columns, std::vector<double> y,
                                   std::vector<std::string> classes, std::string name = "test") {
  Schema s = continuous_schema(columns.size());
  return Dataset(std::move(name), std::move(s), std::move(columns), "y", TaskKind::Classification, std::move(y),
                 std::move(classes));
}

/// Random data: `d` continuous features with values on a coarse grid (so
/// ties occur), optionally one categorical feature appended, and a target
/// that depends on the first features.
inline Dataset synthetic_data(std::mt19937_64& rng, std::size_t n, std::size_t d, TaskKind task,
                           bool with_categorical = false, std::string name = "random") {
  std::uniform_int_distribution<int> grid(0, 20);
  std::normal_distribution<double> noise(0.0, 1.0);
  Schema schema = continuous_schema(d);
  std::vector<std::vector<double>> cols(d);
  for (auto& c : cols) {
    for (std::size_t i = 0; i < n; ++i) c.push_back(grid(rng) / 2.0);
  }
  if (with_categorical) {
    schema.features.push_back({"C", FeatureKind::Categorical, {"a", "b", "c", "d"}});
    std::uniform_int_distribution<int> level(0, 3);
    std::vector<double> codes;
    for (std::size_t i = 0; i < n; ++i) codes.push_back(level(rng));
    cols.push_back(std::move(codes));
  }
  std::vector<double> y;
  std::vector<std::string> classes;
  for (std::size_t i = 0; i < n; ++i) {
    double signal = cols[0][i] + (d > 1 ? 0.5 * cols[1][i] : 0.0) + noise(rng);
    if (with_categorical && cols.back()[i] == 2) signal += 4.0;
    if (task == TaskKind::Regression) {
      y.push_back(signal);
    } else {
      y.push_back(signal < 5.0 ? 0.0 : (signal < 9.0 ? 1.0 : 2.0));
    }
  }
  if (task == TaskKind::Classification) classes = {"low", "mid", "high"};
  return Dataset(std::move(name), std::move(schema), std::move(cols), "y", task, std::move(y), std::move(classes));
}

/// Random binary tree over `schema` with up to `max_depth` levels. Each
/// split stays inside the region of its parent so no path is contradictory.
inline DecisionTree random_tree(std::mt19937_64& rng, const Schema& schema, std::size_t max_depth,
                                TaskKind task = TaskKind::Regression) {
  DecisionTree tree;
  tree.schema = schema;
  tree.task = task;
  if (task == TaskKind::Classification) tree.classes = {"low", "mid", "high"};
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  struct Region {
    std::vector<double> lo, hi;
    std::vector<std::vector<std::size_t>> levels;
  };
  const std::size_t d = schema.size();
  Region root;
  root.lo.assign(d, 0.0);
  root.hi.assign(d, 10.0);
  root.levels.resize(d);
  for (std::size_t f = 0; f < d; ++f) {
    for (std::size_t l = 0; l < schema[f].levels.size(); ++l) root.levels[f].push_back(l);
  }

  std::function<std::int32_t(const Region&, std::size_t)> grow = [&](const Region& region, std::size_t depth) {
    auto id = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.push_back(TreeNode{});
    tree.nodes.back().depth = depth;
    tree.nodes.back().value = task == TaskKind::Regression ? std::round(unit(rng) * 100.0) / 4.0
                                                           : static_cast<double>(rng() % 3);
    bool split = depth < max_depth && unit(rng) < (depth == 0 ? 1.0 : 0.7);
    if (!split) return id;
    std::size_t f = rng() % d;
    Region left = region, right = region;
    double threshold = 0.0;
    if (schema[f].kind == FeatureKind::Continuous) {
      double lo = region.lo[f], hi = region.hi[f];
      if (hi - lo < 0.5) return id;
      threshold = std::round((lo + 0.25 + unit(rng) * (hi - lo - 0.5)) * 4.0) / 4.0;
      if (!(threshold > lo && threshold < hi)) return id;
      left.hi[f] = threshold;
      right.lo[f] = threshold;
    } else {
      const auto& avail = region.levels[f];
      if (avail.size() < 2) return id;
      std::size_t code = avail[rng() % avail.size()];
      threshold = static_cast<double>(code);
      left.levels[f] = {code};
      right.levels[f].erase(std::find(right.levels[f].begin(), right.levels[f].end(), code));
    }
    std::int32_t l = grow(left, depth + 1);
    std::int32_t r = grow(right, depth + 1);
    TreeNode& node = tree.nodes[static_cast<std::size_t>(id)];
    node.feature = f;
    node.threshold = threshold;
    node.left = l;
    node.right = r;
    return id;
  };
  grow(root, 0);
  return tree;
}

/// Observation whose continuous values hit thresholds exactly some of the time.
inline std::vector<FeatureValue> random_observation(std::mt19937_64& rng, const Schema& schema) {
  std::vector<FeatureValue> x;
  for (const FeatureInfo& info : schema.features) {
    if (info.kind == FeatureKind::Continuous) {
      x.emplace_back(static_cast<double>(rng() % 41) / 4.0 + ((rng() % 3 == 0) ? 0.1 : 0.0));
    } else {
      x.emplace_back(info.levels[rng() % info.levels.size()]);
    }
  }
  return x;
}

/// Direct traversal of the tree, written against the raw node fields.
inline double walk_tree(const DecisionTree& tree, const std::vector<FeatureValue>& x) {
  std::size_t i = 0;
  while (tree.nodes[i].left != TreeNode::kNone) {
    const TreeNode& n = tree.nodes[i];
    bool left;
    if (tree.schema[n.feature].kind == FeatureKind::Continuous) {
      left = std::get<double>(x[n.feature]) <= n.threshold;
    } else {
      left = std::get<std::string>(x[n.feature]) == tree.schema[n.feature].levels[static_cast<std::size_t>(n.threshold)];
    }
    i = static_cast<std::size_t>(left ? n.left : n.right);
  }
  return tree.nodes[i].value;
}

/// Best split by enumerating every candidate and recomputing child
/// impurities from scratch (two-pass means / class frequencies).
struct OracleSplit {
  std::size_t feature = 0;
  double threshold = 0.0;
  double gain = 0.0;
  bool found = false;
};

inline double oracle_impurity(const std::vector<double>& y, TaskKind task) {
  if (y.empty()) return 0.0;
  const double n = static_cast<double>(y.size());
  if (task == TaskKind::Regression) {
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= n;
    double sse = 0.0;
    for (double v : y) sse += (v - mean) * (v - mean);
    return sse;
  }
  std::map<double, double> counts;
  for (double v : y) counts[v] += 1.0;
  double gini = 1.0;
  for (const auto& [c, k] : counts) gini -= (k / n) * (k / n);
  return n * gini;
}

inline OracleSplit oracle_best_split(const Dataset& data, std::size_t min_leaf = 1) {
  OracleSplit best;
  std::vector<double> all(data.target().begin(), data.target().end());
  const double parent = oracle_impurity(all, data.task());
  for (std::size_t f = 0; f < data.features(); ++f) {
    auto x = data.column(f);
    std::vector<double> candidates;
    if (data.schema()[f].kind == FeatureKind::Continuous) {
      std::set<double> distinct(x.begin(), x.end());
      std::vector<double> v(distinct.begin(), distinct.end());
      for (std::size_t i = 0; i + 1 < v.size(); ++i) candidates.push_back((v[i] + v[i + 1]) / 2.0);
    } else {
      for (std::size_t c = 0; c < data.schema()[f].levels.size(); ++c) candidates.push_back(static_cast<double>(c));
    }
    for (double t : candidates) {
      std::vector<double> l, r;
      for (std::size_t i = 0; i < data.rows(); ++i) {
        bool left = data.schema()[f].kind == FeatureKind::Continuous ? x[i] <= t : x[i] == t;
        (left ? l : r).push_back(data.target()[i]);
      }
      if (l.size() < min_leaf || r.size() < min_leaf) continue;
      double gain = parent - oracle_impurity(l, data.task()) - oracle_impurity(r, data.task());
      if (!best.found || gain > best.gain) best = {f, t, gain, true};
    }
  }
  return best;
}

}  // namespace rulescore::testing
