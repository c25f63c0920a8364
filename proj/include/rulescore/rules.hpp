#pragma once

#include <compare>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rulescore/schema.hpp"

namespace rulescore {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// One feature value of an observation. Continuous features carry a double,
/// categorical features their label. std::monostate marks a missing value.
using FeatureValue = std::variant<std::monostate, double, std::string>;

/// An observation indexed by feature; positions past the end are missing.
using Observation = std::span<const FeatureValue>;

/// Half-open interval (lower, upper]. Infinite ends denote no bound.
struct Interval {
  double lower = -kInf;
  double upper = kInf;

  bool contains(double v) const { return lower < v && v <= upper; }
  bool vacuous() const { return lower == -kInf && upper == kInf; }

  auto operator<=>(const Interval&) const = default;
};

/// Membership test on a categorical feature. Categories are sorted and unique.
struct MemberOf {
  std::vector<std::string> categories;

  bool contains(const std::string& label) const;

  auto operator<=>(const MemberOf&) const = default;
};

struct Condition {
  std::size_t feature = 0;
  std::variant<Interval, MemberOf> test;

  bool is_interval() const { return std::holds_alternative<Interval>(test); }
  const Interval& interval() const { return std::get<Interval>(test); }
  const MemberOf& member_of() const { return std::get<MemberOf>(test); }

  auto operator<=>(const Condition&) const = default;
};

using Conditions = std::vector<Condition>;

/// If-Then rule: a conjunction of conditions and a constant prediction.
/// For classification the prediction is a class code (index into the owning
/// RuleSet's class labels).
struct Rule {
  Conditions conditions;
  double prediction = 0.0;

  bool operator==(const Rule&) const = default;
};

struct RuleSet {
  TaskKind task = TaskKind::Regression;
  std::vector<Rule> rules;
  double default_prediction = 0.0;
  // Class labels indexed by code; empty for regression.
  std::vector<std::string> classes;

  bool empty() const { return rules.empty(); }
  std::size_t size() const { return rules.size(); }

  bool operator==(const RuleSet&) const = default;
};

/// Merges conditions per feature, drops vacuous ones and sorts by feature.
/// With a schema, membership tests covering every level are vacuous too and
/// condition kinds are checked against feature kinds.
/// Throws ContradictoryRule, VacuousRule or InvalidRule.
Rule canonicalize(const Rule& rule, const Schema* schema = nullptr);

/// Conditions-only form of canonicalize; used wherever rule identity matters.
Conditions canonicalize_conditions(const Conditions& conditions, const Schema* schema = nullptr);

inline std::size_t rule_length(const Rule& rule) { return rule.conditions.size(); }

/// Sum of rule lengths.
std::size_t interpretability_index(const RuleSet& rs);

/// Rule identity ignores predictions.
inline bool same_conditions(const Rule& a, const Rule& b) { return a.conditions == b.conditions; }

bool condition_holds(const Condition& c, Observation x);
bool rule_activated(const Rule& rule, Observation x);

std::string describe(const Condition& c, const Schema* schema = nullptr);
std::string describe(const Rule& rule, const Schema* schema = nullptr);

}  // namespace rulescore
