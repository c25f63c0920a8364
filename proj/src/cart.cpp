#include "rulescore/cart.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include <fmt/format.h>

#include "rulescore/error.hpp"
#include "rulescore/random.hpp"

namespace rulescore {

namespace {

// Relative floor under which an impurity decrease counts as rounding noise.
constexpr double kGainTolerance = 1e-12;

// Sufficient statistics of the target over a set of rows. Regression keeps
// the sum of centered targets; classification keeps per-class counts.
struct TargetStats {
  TaskKind task;
  double center = 0.0;
  double count = 0.0;
  double sum = 0.0;
  double sum_sq = 0.0;
  std::vector<double> class_counts;

  TargetStats(TaskKind t, double c, std::size_t num_classes) : task(t), center(c), class_counts(num_classes, 0.0) {}

  void add(double y) {
    count += 1.0;
    if (task == TaskKind::Regression) {
      double d = y - center;
      sum += d;
      sum_sq += d * d;
    } else {
      class_counts[static_cast<std::size_t>(y)] += 1.0;
    }
  }

  void remove(double y) {
    count -= 1.0;
    if (task == TaskKind::Regression) {
      double d = y - center;
      sum -= d;
      sum_sq -= d * d;
    } else {
      class_counts[static_cast<std::size_t>(y)] -= 1.0;
    }
  }

  // Sum of squares over size: the gain is additive in this quantity.
  double purity() const {
    if (count == 0.0) return 0.0;
    if (task == TaskKind::Regression) return sum * sum / count;
    double s = 0.0;
    for (double c : class_counts) s += c * c;
    return s / count;
  }

  // Total impurity: SSE for regression, n * Gini for classification.
  double impurity() const {
    if (count == 0.0) return 0.0;
    if (task == TaskKind::Regression) return sum_sq - sum * sum / count;
    return count - purity();
  }
};

std::size_t num_classes(const Dataset& data) {
  if (data.task() == TaskKind::Regression) return 0;
  std::size_t k = data.classes().size();
  for (double y : data.target()) k = std::max(k, static_cast<std::size_t>(y) + 1);
  return k;
}

TargetStats stats_of(const Dataset& data, std::span<const std::size_t> rows) {
  auto y = data.target();
  double center = 0.0;
  if (data.task() == TaskKind::Regression && !rows.empty()) {
    for (std::size_t r : rows) center += y[r];
    center /= static_cast<double>(rows.size());
  }
  TargetStats s(data.task(), center, num_classes(data));
  for (std::size_t r : rows) s.add(y[r]);
  return s;
}

}  // namespace

double leaf_value(std::span<const double> targets, TaskKind task) {
  if (targets.empty()) throw Error(ErrorCode::EmptyData, "leaf without samples");
  if (task == TaskKind::Regression) {
    double sum = 0.0;
    for (double y : targets) sum += y;
    return sum / static_cast<double>(targets.size());
  }
  std::map<double, std::size_t> counts;
  for (double y : targets) ++counts[y];
  double best = counts.begin()->first;
  std::size_t best_count = 0;
  for (const auto& [code, count] : counts) {
    if (count > best_count) {
      best = code;
      best_count = count;
    }
  }
  return best;
}

std::optional<SplitCandidate> best_split(const Dataset& data, std::span<const std::size_t> rows,
                                         std::span<const std::size_t> features, std::size_t min_samples_leaf) {
  const std::size_t n = rows.size();
  const std::size_t min_leaf = std::max<std::size_t>(min_samples_leaf, 1);
  if (n < 2 * min_leaf) return std::nullopt;

  const TargetStats parent = stats_of(data, rows);
  const double parent_purity = parent.purity();
  const double parent_impurity = parent.impurity();
  if (!(parent_impurity > 0.0)) return std::nullopt;
  const double floor = kGainTolerance * parent_impurity;

  auto y = data.target();
  std::optional<SplitCandidate> best;
  auto consider = [&](std::size_t feature, double threshold, double gain) {
    if (!(gain > floor)) return;
    if (!best || gain > best->gain) best = SplitCandidate{feature, threshold, gain};
  };

  std::vector<std::size_t> order(rows.begin(), rows.end());
  for (std::size_t f : features) {
    auto x = data.column(f);
    if (data.schema()[f].kind == FeatureKind::Continuous) {
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
      TargetStats left(parent.task, parent.center, parent.class_counts.size());
      TargetStats right = parent;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        left.add(y[order[i]]);
        right.remove(y[order[i]]);
        double lo = x[order[i]];
        double hi = x[order[i + 1]];
        if (!(lo < hi)) continue;
        if (i + 1 < min_leaf || n - i - 1 < min_leaf) continue;
        double threshold = lo + (hi - lo) / 2.0;
        if (!(threshold < hi)) threshold = lo;
        consider(f, threshold, left.purity() + right.purity() - parent_purity);
      }
      std::copy(rows.begin(), rows.end(), order.begin());
    } else {
      const std::size_t levels = data.schema()[f].levels.size();
      std::vector<TargetStats> per_level(levels, TargetStats(parent.task, parent.center, parent.class_counts.size()));
      for (std::size_t r : rows) per_level[static_cast<std::size_t>(x[r])].add(y[r]);
      for (std::size_t code = 0; code < levels; ++code) {
        const TargetStats& left = per_level[code];
        auto n_left = static_cast<std::size_t>(left.count);
        if (n_left < min_leaf || n - n_left < min_leaf) continue;
        TargetStats right = parent;
        for (std::size_t r : rows) {
          if (static_cast<std::size_t>(x[r]) == code) right.remove(y[r]);
        }
        consider(f, static_cast<double>(code), left.purity() + right.purity() - parent_purity);
      }
    }
  }
  return best;
}

DecisionTree fit_cart(const Dataset& data, const CartParams& params) {
  if (data.rows() == 0) throw Error(ErrorCode::EmptyData, "cannot fit a tree on empty data");
  if (params.max_leaf_nodes < 2) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("max_leaf_nodes={} must be >= 2", params.max_leaf_nodes));
  }
  if (params.min_samples_leaf < 1) throw Error(ErrorCode::InvalidArgument, "min_samples_leaf must be >= 1");

  DecisionTree tree;
  tree.schema = data.schema();
  tree.task = data.task();
  tree.classes = data.classes();

  const std::size_t d = data.features();
  std::vector<std::size_t> all_features(d);
  std::iota(all_features.begin(), all_features.end(), 0);
  const bool subsample = params.max_features > 0 && params.max_features < d;

  auto features_for = [&](std::size_t node_id) {
    if (!subsample) return all_features;
    std::vector<std::size_t> pool = all_features;
    Rng rng(derive_seed({params.seed, node_id}));
    for (std::size_t i = 0; i < params.max_features; ++i) {
      std::size_t j = i + rng.index(d - i);
      std::swap(pool[i], pool[j]);
    }
    pool.resize(params.max_features);
    std::sort(pool.begin(), pool.end());
    return pool;
  };

  auto target = data.target();
  auto make_node = [&](const std::vector<std::size_t>& rows, std::size_t depth) {
    std::vector<double> ys;
    ys.reserve(rows.size());
    for (std::size_t r : rows) ys.push_back(target[r]);
    TreeNode node;
    node.value = leaf_value(ys, data.task());
    node.depth = depth;
    node.samples = rows.size();
    return node;
  };

  std::vector<std::vector<std::size_t>> node_rows;
  std::vector<std::optional<SplitCandidate>> pending;

  auto add_node = [&](std::vector<std::size_t> rows, std::size_t depth) {
    tree.nodes.push_back(make_node(rows, depth));
    std::size_t id = tree.nodes.size() - 1;
    std::optional<SplitCandidate> split;
    if (params.max_depth == 0 || depth < params.max_depth) {
      split = best_split(data, rows, features_for(id), params.min_samples_leaf);
    }
    node_rows.push_back(std::move(rows));
    pending.push_back(split);
    return id;
  };

  std::vector<std::size_t> root_rows(data.rows());
  std::iota(root_rows.begin(), root_rows.end(), 0);
  add_node(std::move(root_rows), 0);

  std::size_t leaves = 1;
  while (leaves < params.max_leaf_nodes) {
    std::optional<std::size_t> pick;
    for (std::size_t i = 0; i < pending.size(); ++i) {
      if (!pending[i]) continue;
      if (!pick || pending[i]->gain > pending[*pick]->gain) pick = i;
    }
    if (!pick) break;

    const std::size_t id = *pick;
    const SplitCandidate split = *pending[id];
    pending[id].reset();

    auto x = data.column(split.feature);
    const bool categorical = data.schema()[split.feature].kind == FeatureKind::Categorical;
    std::vector<std::size_t> left_rows, right_rows;
    for (std::size_t r : node_rows[id]) {
      bool go_left = categorical ? x[r] == split.threshold : x[r] <= split.threshold;
      (go_left ? left_rows : right_rows).push_back(r);
    }
    node_rows[id].clear();
    node_rows[id].shrink_to_fit();

    const std::size_t depth = tree.nodes[id].depth + 1;
    std::size_t left_id = add_node(std::move(left_rows), depth);
    std::size_t right_id = add_node(std::move(right_rows), depth);
    TreeNode& node = tree.nodes[id];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = static_cast<std::int32_t>(left_id);
    node.right = static_cast<std::int32_t>(right_id);
    ++leaves;
  }
  return tree;
}

}  // namespace rulescore
