#include "rulescore/scores.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "rulescore/error.hpp"

namespace rulescore {

Contrast contrast_for(TaskKind task) {
  return task == TaskKind::Regression ? Contrast::Quadratic : Contrast::ZeroOne;
}

Weights::Weights() : a1_(1.0 / 3.0), a2_(1.0 / 3.0), a3_(1.0 / 3.0) {}

Weights Weights::make(double predictivity, double stability, double simplicity) {
  for (double a : {predictivity, stability, simplicity}) {
    if (!(a >= 0.0 && a <= 1.0)) {
      throw Error(ErrorCode::InvalidWeights, fmt::format("weight {} outside [0,1]", a));
    }
  }
  double sum = predictivity + stability + simplicity;
  if (std::abs(sum - 1.0) > 1e-12) {
    throw Error(ErrorCode::InvalidWeights, fmt::format("weights sum to {}, expected 1", sum));
  }
  return Weights(predictivity, stability, simplicity);
}

Weights Weights::normalized(double predictivity, double stability, double simplicity) {
  for (double a : {predictivity, stability, simplicity}) {
    if (!(a >= 0.0) || !std::isfinite(a)) {
      throw Error(ErrorCode::InvalidWeights, fmt::format("weight {} must be finite and non-negative", a));
    }
  }
  double sum = predictivity + stability + simplicity;
  if (!(sum > 0.0)) throw Error(ErrorCode::InvalidWeights, "weights sum to 0");
  return Weights(predictivity / sum, stability / sum, simplicity / sum);
}

double empirical_risk(std::span<const double> preds, std::span<const double> targets, Contrast c) {
  if (preds.size() != targets.size()) {
    throw Error(ErrorCode::LengthMismatch,
                fmt::format("{} predictions for {} targets", preds.size(), targets.size()));
  }
  if (preds.empty()) throw Error(ErrorCode::EmptyInput, "empirical risk of an empty sample");
  double total = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (c == Contrast::Quadratic) {
      double d = preds[i] - targets[i];
      total += d * d;
    } else {
      total += preds[i] != targets[i] ? 1.0 : 0.0;
    }
  }
  return total / static_cast<double>(preds.size());
}

double baseline_prediction(std::span<const double> train_targets, TaskKind task) {
  if (train_targets.empty()) throw Error(ErrorCode::EmptyInput, "baseline of an empty sample");
  if (task == TaskKind::Regression) {
    double sum = 0.0;
    for (double y : train_targets) sum += y;
    return sum / static_cast<double>(train_targets.size());
  }
  std::map<double, std::size_t> counts;
  for (double y : train_targets) ++counts[y];
  // Map iteration is ascending by code, so strict > keeps the smallest code.
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

double predictivity(double model_risk, double baseline_risk) {
  if (!(baseline_risk >= 0.0) || !(model_risk >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("risks must be non-negative (model {}, baseline {})", model_risk, baseline_risk));
  }
  if (baseline_risk == 0.0) {
    if (model_risk == 0.0) return 0.0;
    throw Error(ErrorCode::DegenerateBaseline,
                fmt::format("baseline risk is 0 but model risk is {}", model_risk));
  }
  return 1.0 - model_risk / baseline_risk;
}

double dice_sorensen(const DiscretizedRuleSet& a, const DiscretizedRuleSet& b) {
  if (a.empty() && b.empty()) return 0.0;
  // Both sets are sorted; walk them in lockstep.
  std::size_t common = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  return 2.0 * static_cast<double>(common) / static_cast<double>(a.size() + b.size());
}

double q_stability(const RuleSet& r1, const Dataset& d1, const RuleSet& r2, const Dataset& d2, std::size_t q) {
  if (d1.schema() != d2.schema() || d1.task() != d2.task()) {
    throw Error(ErrorCode::SchemaError, "stability samples must share schema and task");
  }
  QuantileGrid g1 = fit_quantile_grid(d1, q);
  QuantileGrid g2 = fit_quantile_grid(d2, q);
  return dice_sorensen(discretize_ruleset(g1, r1), discretize_ruleset(g2, r2));
}

double q_stability(const RuleLearner& learner, const Dataset& d1, const Dataset& d2, std::size_t q,
                   std::uint64_t seed) {
  if (d1.schema() != d2.schema() || d1.task() != d2.task()) {
    throw Error(ErrorCode::SchemaError, "stability samples must share schema and task");
  }
  RuleSet r1 = learner(d1, seed);
  RuleSet r2 = learner(d2, seed);
  return q_stability(r1, d1, r2, d2, q);
}

std::map<std::string, double> simplicity_scores(const std::map<std::string, std::size_t>& ints) {
  if (ints.size() < 2) {
    throw Error(ErrorCode::FewerThanTwoAlgorithms,
                fmt::format("simplicity is relative and needs >= 2 algorithms, got {}", ints.size()));
  }
  std::size_t min_positive = std::numeric_limits<std::size_t>::max();
  for (const auto& [id, value] : ints) {
    if (value > 0) min_positive = std::min(min_positive, value);
  }
  if (min_positive == std::numeric_limits<std::size_t>::max()) {
    throw Error(ErrorCode::AllEmpty, "every algorithm produced an empty rule set");
  }
  std::map<std::string, double> out;
  for (const auto& [id, value] : ints) {
    out[id] = value == 0 ? 0.0 : static_cast<double>(min_positive) / static_cast<double>(value);
  }
  return out;
}

double interpretability(double predictivity, double stability, double simplicity, const Weights& w) {
  if (!(stability >= 0.0 && stability <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("stability {} outside [0,1]", stability));
  }
  if (!(simplicity >= 0.0 && simplicity <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("simplicity {} outside [0,1]", simplicity));
  }
  if (std::isnan(predictivity)) throw Error(ErrorCode::InvalidArgument, "predictivity is NaN");
  return w.predictivity() * std::max(predictivity, 0.0) + w.stability() * stability +
         w.simplicity() * simplicity;
}

}  // namespace rulescore
