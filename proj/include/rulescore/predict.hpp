#pragma once

#include <vector>

#include "rulescore/dataset.hpp"
#include "rulescore/rules.hpp"

namespace rulescore {

/// Regression: mean prediction of the activated rules. Classification:
/// majority vote with smallest-code tie-break. Falls back to the default
/// prediction when no rule activates. Throws MissingFeature.
double predict_ruleset(const RuleSet& rs, Observation x);

/// predict_ruleset over every row of `data`.
std::vector<double> predict_ruleset(const RuleSet& rs, const Dataset& data);

}  // namespace rulescore
