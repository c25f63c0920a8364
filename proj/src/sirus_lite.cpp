#include "rulescore/sirus_lite.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <fmt/format.h>

#include "rulescore/cart.hpp"
#include "rulescore/error.hpp"
#include "rulescore/random.hpp"
#include "rulescore/scores.hpp"
#include "rulescore/tree.hpp"

namespace rulescore {

namespace {

Dataset binned(const Dataset& data, const QuantileGrid& grid) {
  Dataset out = data;
  for (const auto& [f, cuts] : grid.cuts()) {
    std::vector<double> bins;
    bins.reserve(data.rows());
    for (double v : data.column(f)) bins.push_back(static_cast<double>(grid.bin_of(f, v)));
    out = out.with_column(f, std::move(bins));
  }
  return out;
}

// Trees grown on bin indices split at j + 0.5, i.e. "bin <= j", which is
// "x <= cuts[j-1]" on the original scale.
void map_thresholds_to_cuts(DecisionTree& tree, const QuantileGrid& grid) {
  for (TreeNode& node : tree.nodes) {
    if (node.is_leaf() || tree.schema[node.feature].kind != FeatureKind::Continuous) continue;
    auto j = static_cast<std::size_t>(std::floor(node.threshold));
    node.threshold = grid.cuts(node.feature).at(j - 1);
  }
}

}  // namespace

SirusLiteFit fit_sirus_lite(const Dataset& data, const SirusLiteParams& params) {
  if (data.rows() == 0) throw Error(ErrorCode::EmptyData, "cannot fit rules on empty data");
  if (params.n_trees < 1) throw Error(ErrorCode::InvalidArgument, "n_trees must be >= 1");
  if (params.max_depth < 1) throw Error(ErrorCode::InvalidArgument, "max_depth must be >= 1");
  if (!(params.p0 > 0.0 && params.p0 <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("p0={} must lie in (0,1]", params.p0));
  }

  const QuantileGrid grid = fit_quantile_grid(data, params.q);
  const Dataset binned_data = binned(data, grid);

  CartParams cart;
  cart.max_depth = params.max_depth;
  cart.max_leaf_nodes = std::size_t{1} << std::min<std::size_t>(params.max_depth, 20);
  cart.max_leaf_nodes = std::max<std::size_t>(cart.max_leaf_nodes, 2);
  cart.max_features = params.max_features > 0 ? params.max_features : std::max<std::size_t>(1, data.features() / 3);

  std::map<Conditions, std::size_t> counts;
  const std::size_t n = data.rows();
  for (std::size_t t = 0; t < params.n_trees; ++t) {
    const std::uint64_t tree_seed = params.seed + t;
    Rng rng(tree_seed);
    std::vector<std::size_t> sample(n);
    for (auto& s : sample) s = rng.index(n);

    cart.seed = tree_seed;
    DecisionTree tree = fit_cart(binned_data.subset(sample), cart);
    map_thresholds_to_cuts(tree, grid);

    auto paths = tree.node_paths();
    std::set<Conditions> in_tree;
    for (std::size_t i = 1; i < paths.size(); ++i) {
      in_tree.insert(canonicalize_conditions(paths[i], &tree.schema));
    }
    for (const auto& c : in_tree) ++counts[c];
  }

  // A rule is kept when count / n_trees >= p0.
  const double needed = params.p0 * static_cast<double>(params.n_trees) - 1e-9;
  std::vector<std::pair<std::size_t, const Conditions*>> kept;
  for (const auto& [conditions, count] : counts) {
    if (static_cast<double>(count) >= needed) kept.emplace_back(count, &conditions);
  }
  // `counts` is ordered by canonical form, so a stable sort on frequency
  // leaves ties in canonical order.
  std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  if (kept.size() > params.max_rules) kept.resize(params.max_rules);

  SirusLiteFit fit;
  fit.rules.task = data.task();
  fit.rules.classes = data.classes();
  fit.rules.default_prediction = baseline_prediction(data.target(), data.task());
  fit.no_rule_selected = kept.empty();

  std::vector<std::vector<FeatureValue>> observations;
  observations.reserve(n);
  for (std::size_t i = 0; i < n; ++i) observations.push_back(data.observation(i));

  auto y = data.target();
  for (const auto& [count, conditions] : kept) {
    Rule rule{*conditions, fit.rules.default_prediction};
    std::vector<double> covered;
    for (std::size_t i = 0; i < n; ++i) {
      if (rule_activated(rule, observations[i])) covered.push_back(y[i]);
    }
    if (!covered.empty()) rule.prediction = leaf_value(covered, data.task());
    fit.rules.rules.push_back(std::move(rule));
    fit.frequencies.push_back(static_cast<double>(count) / static_cast<double>(params.n_trees));
  }
  return fit;
}

}  // namespace rulescore
