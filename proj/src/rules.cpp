#include "rulescore/rules.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iterator>
#include <map>

#include <fmt/format.h>

#include "rulescore/error.hpp"

namespace rulescore {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ContradictoryRule: return "ContradictoryRule";
    case ErrorCode::VacuousRule: return "VacuousRule";
    case ErrorCode::InvalidRule: return "InvalidRule";
    case ErrorCode::MissingFeature: return "MissingFeature";
    case ErrorCode::UnknownFeature: return "UnknownFeature";
    case ErrorCode::EmptyData: return "EmptyData";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::DegenerateBaseline: return "DegenerateBaseline";
    case ErrorCode::FewerThanTwoAlgorithms: return "FewerThanTwoAlgorithms";
    case ErrorCode::AllEmpty: return "AllEmpty";
    case ErrorCode::InvalidWeights: return "InvalidWeights";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MissingValues: return "MissingValues";
    case ErrorCode::UnknownTarget: return "UnknownTarget";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::BadK: return "BadK";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::InsufficientRows: return "InsufficientRows";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

std::string to_string(TaskKind task) {
  return task == TaskKind::Regression ? "regression" : "classification";
}

std::optional<TaskKind> parse_task(const std::string& text) {
  if (text == "regression") return TaskKind::Regression;
  if (text == "classification") return TaskKind::Classification;
  return std::nullopt;
}

namespace {

std::optional<double> parse_number(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

}  // namespace

std::vector<std::string> sort_labels(std::vector<std::string> labels) {
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  bool numeric = !labels.empty() && std::all_of(labels.begin(), labels.end(), [](const std::string& s) {
    return parse_number(s).has_value();
  });
  if (numeric) {
    std::stable_sort(labels.begin(), labels.end(), [](const std::string& a, const std::string& b) {
      return *parse_number(a) < *parse_number(b);
    });
  }
  return labels;
}

bool MemberOf::contains(const std::string& label) const {
  return std::binary_search(categories.begin(), categories.end(), label);
}

namespace {

MemberOf normalized(MemberOf m) {
  std::sort(m.categories.begin(), m.categories.end());
  m.categories.erase(std::unique(m.categories.begin(), m.categories.end()), m.categories.end());
  return m;
}

}  // namespace

Conditions canonicalize_conditions(const Conditions& conditions, const Schema* schema) {
  std::map<std::size_t, Condition> merged;
  for (const Condition& c : conditions) {
    if (schema && c.feature >= schema->size()) {
      throw Error(ErrorCode::UnknownFeature, fmt::format("condition on unknown feature {}", c.feature));
    }
    Condition current = c;
    if (current.is_interval()) {
      const Interval& iv = current.interval();
      if (std::isnan(iv.lower) || std::isnan(iv.upper)) {
        throw Error(ErrorCode::InvalidRule, fmt::format("NaN bound on feature {}", c.feature));
      }
      if (schema && (*schema)[c.feature].kind != FeatureKind::Continuous) {
        throw Error(ErrorCode::InvalidRule,
                    fmt::format("interval test on categorical feature {}", c.feature));
      }
    } else {
      current.test = normalized(current.member_of());
      if (current.member_of().categories.empty()) {
        throw Error(ErrorCode::ContradictoryRule,
                    fmt::format("empty category set on feature {}", c.feature));
      }
      if (schema && (*schema)[c.feature].kind != FeatureKind::Categorical) {
        throw Error(ErrorCode::InvalidRule,
                    fmt::format("membership test on continuous feature {}", c.feature));
      }
    }

    auto it = merged.find(c.feature);
    if (it == merged.end()) {
      merged.emplace(c.feature, std::move(current));
      continue;
    }
    Condition& prev = it->second;
    if (prev.is_interval() != current.is_interval()) {
      throw Error(ErrorCode::InvalidRule,
                  fmt::format("mixed interval and membership tests on feature {}", c.feature));
    }
    if (prev.is_interval()) {
      Interval a = prev.interval();
      const Interval& b = current.interval();
      a.lower = std::max(a.lower, b.lower);
      a.upper = std::min(a.upper, b.upper);
      prev.test = a;
    } else {
      const auto& a = prev.member_of().categories;
      const auto& b = current.member_of().categories;
      MemberOf out;
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out.categories));
      prev.test = std::move(out);
    }
  }

  Conditions out;
  out.reserve(merged.size());
  for (auto& [feature, c] : merged) {
    if (c.is_interval()) {
      const Interval& iv = c.interval();
      if (!(iv.lower < iv.upper)) {
        throw Error(ErrorCode::ContradictoryRule,
                    fmt::format("empty interval ({}, {}] on feature {}", iv.lower, iv.upper, feature));
      }
      if (iv.vacuous()) continue;
    } else {
      const auto& cats = c.member_of().categories;
      if (cats.empty()) {
        throw Error(ErrorCode::ContradictoryRule,
                    fmt::format("empty category intersection on feature {}", feature));
      }
      if (schema) {
        const auto& levels = (*schema)[feature].levels;
        auto sorted_levels = levels;
        std::sort(sorted_levels.begin(), sorted_levels.end());
        if (std::includes(cats.begin(), cats.end(), sorted_levels.begin(), sorted_levels.end())) continue;
      }
    }
    out.push_back(std::move(c));
  }
  if (out.empty()) {
    throw Error(ErrorCode::VacuousRule, "rule has no non-vacuous condition");
  }
  return out;
}

Rule canonicalize(const Rule& rule, const Schema* schema) {
  return Rule{canonicalize_conditions(rule.conditions, schema), rule.prediction};
}

std::size_t interpretability_index(const RuleSet& rs) {
  std::size_t total = 0;
  for (const Rule& r : rs.rules) total += rule_length(r);
  return total;
}

bool condition_holds(const Condition& c, Observation x) {
  if (c.feature >= x.size() || std::holds_alternative<std::monostate>(x[c.feature])) {
    throw Error(ErrorCode::MissingFeature, fmt::format("observation lacks feature {}", c.feature));
  }
  const FeatureValue& v = x[c.feature];
  if (c.is_interval()) {
    const double* num = std::get_if<double>(&v);
    if (!num) {
      throw Error(ErrorCode::SchemaError,
                  fmt::format("feature {} is categorical but tested with an interval", c.feature));
    }
    return c.interval().contains(*num);
  }
  const std::string* label = std::get_if<std::string>(&v);
  if (!label) {
    throw Error(ErrorCode::SchemaError,
                fmt::format("feature {} is continuous but tested for membership", c.feature));
  }
  return c.member_of().contains(*label);
}

bool rule_activated(const Rule& rule, Observation x) {
  // Evaluate every condition so missing features always surface.
  bool active = true;
  for (const Condition& c : rule.conditions) {
    active = condition_holds(c, x) && active;
  }
  return active;
}

std::string describe(const Condition& c, const Schema* schema) {
  std::string name = (schema && c.feature < schema->size()) ? (*schema)[c.feature].name
                                                             : fmt::format("X{}", c.feature);
  if (c.is_interval()) {
    const Interval& iv = c.interval();
    if (iv.lower == -kInf) return fmt::format("{} <= {}", name, iv.upper);
    if (iv.upper == kInf) return fmt::format("{} > {}", name, iv.lower);
    return fmt::format("{} in ({}, {}]", name, iv.lower, iv.upper);
  }
  return fmt::format("{} in {{{}}}", name, fmt::join(c.member_of().categories, ", "));
}

std::string describe(const Rule& rule, const Schema* schema) {
  std::vector<std::string> parts;
  for (const Condition& c : rule.conditions) parts.push_back(describe(c, schema));
  return fmt::format("IF {} THEN {}", fmt::join(parts, " AND "), rule.prediction);
}

}  // namespace rulescore
