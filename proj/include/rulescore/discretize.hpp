#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rulescore/dataset.hpp"
#include "rulescore/rules.hpp"

namespace rulescore {

inline constexpr std::size_t kDefaultBins = 10;

/// Per-feature empirical quantile cut points.
///
/// Bins are left-open/right-closed and numbered from 1: a value v falls in
/// the smallest bin p with v <= cuts[p-1], or in the last bin when it exceeds
/// every cut. Tied quantiles are collapsed, so a feature may have fewer than
/// q bins.
class QuantileGrid {
 public:
  QuantileGrid() = default;
  QuantileGrid(std::size_t q, std::map<std::size_t, std::vector<double>> cuts, std::string fitted_on = {});

  std::size_t q() const { return q_; }
  const std::map<std::size_t, std::vector<double>>& cuts() const { return cuts_; }
  const std::vector<double>& cuts(std::size_t f) const;
  const std::string& fitted_on() const { return fitted_on_; }

  bool has_feature(std::size_t f) const { return cuts_.count(f) != 0; }

  /// Number of bins actually realized for feature f (cut count + 1).
  std::size_t bin_count(std::size_t f) const { return cuts(f).size() + 1; }

  /// Throws UnknownFeature when f has no cuts.
  std::size_t bin_of(std::size_t f, double v) const;

 private:
  std::size_t q_ = kDefaultBins;
  std::map<std::size_t, std::vector<double>> cuts_;
  std::string fitted_on_;
};

/// Order statistics at index ceil(n*p/q)-1 of the sorted column, p = 1..q-1,
/// with duplicates removed.
std::vector<double> quantile_cuts(std::span<const double> column, std::size_t q);

/// Fits cuts for every continuous feature. Throws EmptyData, InvalidArgument.
QuantileGrid fit_quantile_grid(const Dataset& data, std::size_t q);

struct BinInterval {
  std::size_t lower = 1;
  std::size_t upper = 1;

  auto operator<=>(const BinInterval&) const = default;
};

struct DiscretizedCondition {
  std::size_t feature = 0;
  std::variant<BinInterval, MemberOf> test;

  auto operator<=>(const DiscretizedCondition&) const = default;
};

struct DiscretizedRule {
  std::vector<DiscretizedCondition> conditions;

  auto operator<=>(const DiscretizedRule&) const = default;
};

using DiscretizedRuleSet = std::set<DiscretizedRule>;

/// Interval (a, b] becomes bins [bin_of(a), bin_of(b)], with -inf mapped to
/// bin 1 and +inf to the last bin. Membership tests pass through.
DiscretizedRule discretize_rule(const QuantileGrid& grid, const Rule& rule);

/// Set semantics: rules that coincide after discretization collapse.
DiscretizedRuleSet discretize_ruleset(const QuantileGrid& grid, const RuleSet& rs);

}  // namespace rulescore
