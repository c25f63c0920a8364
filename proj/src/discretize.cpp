#include "rulescore/discretize.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "rulescore/error.hpp"

namespace rulescore {

QuantileGrid::QuantileGrid(std::size_t q, std::map<std::size_t, std::vector<double>> cuts, std::string fitted_on)
    : q_(q), cuts_(std::move(cuts)), fitted_on_(std::move(fitted_on)) {
  if (q_ < 2) throw Error(ErrorCode::InvalidArgument, fmt::format("bin count q={} must be >= 2", q_));
}

const std::vector<double>& QuantileGrid::cuts(std::size_t f) const {
  auto it = cuts_.find(f);
  if (it == cuts_.end()) {
    throw Error(ErrorCode::UnknownFeature, fmt::format("feature {} is not in the quantile grid", f));
  }
  return it->second;
}

std::size_t QuantileGrid::bin_of(std::size_t f, double v) const {
  const auto& c = cuts(f);
  auto it = std::lower_bound(c.begin(), c.end(), v);
  return static_cast<std::size_t>(it - c.begin()) + 1;
}

std::vector<double> quantile_cuts(std::span<const double> column, std::size_t q) {
  if (column.empty()) throw Error(ErrorCode::EmptyData, "cannot fit quantiles on an empty column");
  if (q < 2) throw Error(ErrorCode::InvalidArgument, fmt::format("bin count q={} must be >= 2", q));
  std::vector<double> sorted(column.begin(), column.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  std::vector<double> cuts;
  cuts.reserve(q - 1);
  for (std::size_t p = 1; p < q; ++p) {
    // ceil(n*p/q) in exact integer arithmetic.
    std::size_t rank = (n * p + q - 1) / q;
    std::size_t idx = rank == 0 ? 0 : rank - 1;
    cuts.push_back(sorted[idx]);
  }
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

QuantileGrid fit_quantile_grid(const Dataset& data, std::size_t q) {
  if (data.rows() == 0) throw Error(ErrorCode::EmptyData, "cannot fit a quantile grid on empty data");
  std::map<std::size_t, std::vector<double>> cuts;
  for (std::size_t f = 0; f < data.features(); ++f) {
    if (data.schema()[f].kind != FeatureKind::Continuous) continue;
    cuts.emplace(f, quantile_cuts(data.column(f), q));
  }
  return QuantileGrid(q, std::move(cuts), fmt::format("{}[n={}]", data.name(), data.rows()));
}

DiscretizedRule discretize_rule(const QuantileGrid& grid, const Rule& rule) {
  DiscretizedRule out;
  out.conditions.reserve(rule.conditions.size());
  for (const Condition& c : rule.conditions) {
    if (!c.is_interval()) {
      out.conditions.push_back({c.feature, c.member_of()});
      continue;
    }
    const Interval& iv = c.interval();
    std::size_t last = grid.bin_count(c.feature);
    BinInterval bins;
    bins.lower = iv.lower == -kInf ? 1 : grid.bin_of(c.feature, iv.lower);
    bins.upper = iv.upper == kInf ? last : grid.bin_of(c.feature, iv.upper);
    out.conditions.push_back({c.feature, bins});
  }
  return out;
}

DiscretizedRuleSet discretize_ruleset(const QuantileGrid& grid, const RuleSet& rs) {
  DiscretizedRuleSet out;
  for (const Rule& r : rs.rules) out.insert(discretize_rule(grid, r));
  return out;
}

}  // namespace rulescore
