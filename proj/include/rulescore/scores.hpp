#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>

#include "rulescore/dataset.hpp"
#include "rulescore/discretize.hpp"
#include "rulescore/rules.hpp"

namespace rulescore {

enum class Contrast { Quadratic, ZeroOne };

/// Quadratic for regression, 0-1 for classification.
Contrast contrast_for(TaskKind task);

/// Convex weights of the interpretability score.
class Weights {
 public:
  /// Equal weights 1/3 each.
  Weights();

  /// Throws InvalidWeights unless each weight is in [0,1] and they sum to 1
  /// within 1e-12.
  static Weights make(double predictivity, double stability, double simplicity);

  /// Rescales non-negative weights to sum 1, preserving ratios.
  static Weights normalized(double predictivity, double stability, double simplicity);

  double predictivity() const { return a1_; }
  double stability() const { return a2_; }
  double simplicity() const { return a3_; }

 private:
  Weights(double a1, double a2, double a3) : a1_(a1), a2_(a2), a3_(a3) {}
  double a1_, a2_, a3_;
};

/// Mean contrast between predictions and targets.
/// Throws EmptyInput, LengthMismatch.
double empirical_risk(std::span<const double> preds, std::span<const double> targets, Contrast c);

/// Training-target mean (regression) or mode with smallest-code tie-break
/// (classification). Throws EmptyInput.
double baseline_prediction(std::span<const double> train_targets, TaskKind task);

/// 1 - model_risk / baseline_risk. A perfect baseline with a perfect model
/// gives 0; a perfect baseline with an imperfect model throws
/// DegenerateBaseline.
double predictivity(double model_risk, double baseline_risk);

/// 2|a ∩ b| / (|a| + |b|), 0 when both sets are empty.
double dice_sorensen(const DiscretizedRuleSet& a, const DiscretizedRuleSet& b);

/// A rule-generating algorithm: data and seed in, fitted rule set out.
using RuleLearner = std::function<RuleSet(const Dataset&, std::uint64_t seed)>;

/// Fits `learner` on d1 and d2 with the same seed, discretizes each rule set
/// on a grid fitted to its own sample and returns their Dice-Sorensen index.
double q_stability(const RuleLearner& learner, const Dataset& d1, const Dataset& d2, std::size_t q,
                   std::uint64_t seed = 0);

/// Stability of two already-fitted rule sets on their own samples' grids.
double q_stability(const RuleSet& r1, const Dataset& d1, const RuleSet& r2, const Dataset& d2, std::size_t q);

/// min positive Int / own Int. Empty models (Int 0) score 0 and do not take
/// part in the minimum. Throws FewerThanTwoAlgorithms, AllEmpty.
std::map<std::string, double> simplicity_scores(const std::map<std::string, std::size_t>& ints);

/// Weighted combination; negative predictivity is clamped to 0.
/// Throws InvalidArgument when stability or simplicity leave [0,1].
double interpretability(double predictivity, double stability, double simplicity, const Weights& w);

}  // namespace rulescore
