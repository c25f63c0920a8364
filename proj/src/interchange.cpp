#include "rulescore/interchange.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <fmt/format.h>

#include "rulescore/error.hpp"

namespace rulescore {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json bound_to_json(double v) {
  if (std::isinf(v)) return nullptr;
  return v;
}

ordered_json prediction_to_json(const RuleSet& rs, double p) {
  if (rs.task == TaskKind::Regression) return p;
  auto code = static_cast<std::size_t>(p);
  if (code < rs.classes.size()) return rs.classes[code];
  return p;
}

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::SchemaError, fmt::format("{}: {}", where, what));
}

std::string label_of(const json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return fmt::format("{}", v.get<long long>());
  if (v.is_number()) return fmt::format("{}", v.get<double>());
  schema_error(where, "expected a string or number");
}

double bound_of(const json& obj, const char* key, double unbounded, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return unbounded;
  if (!it->is_number()) schema_error(where + "." + key, "expected a number or null");
  double v = it->get<double>();
  if (std::isnan(v)) schema_error(where + "." + key, "NaN bound");
  return v;
}

Condition parse_condition(const json& c, const std::string& where) {
  if (!c.is_object()) schema_error(where, "expected an object");
  auto feature = c.find("feature");
  if (feature == c.end() || !feature->is_number_integer() || feature->get<long long>() < 0) {
    schema_error(where + ".feature", "expected a non-negative integer");
  }
  auto kind = c.find("kind");
  if (kind == c.end() || !kind->is_string()) schema_error(where + ".kind", "expected a string");

  Condition out;
  out.feature = feature->get<std::size_t>();
  const std::string k = kind->get<std::string>();
  if (k == "interval") {
    out.test = Interval{bound_of(c, "lower", -kInf, where), bound_of(c, "upper", kInf, where)};
  } else if (k == "member_of") {
    auto cats = c.find("categories");
    if (cats == c.end() || !cats->is_array()) schema_error(where + ".categories", "expected an array");
    MemberOf m;
    for (std::size_t i = 0; i < cats->size(); ++i) {
      m.categories.push_back(label_of((*cats)[i], fmt::format("{}.categories[{}]", where, i)));
    }
    if (m.categories.empty()) schema_error(where + ".categories", "must not be empty");
    out.test = std::move(m);
  } else {
    schema_error(where + ".kind", fmt::format("unknown kind '{}', expected 'interval' or 'member_of'", k));
  }
  return out;
}

}  // namespace

ordered_json export_rules(const RuleSet& rs) {
  ordered_json doc;
  doc["task"] = to_string(rs.task);
  doc["default_prediction"] = prediction_to_json(rs, rs.default_prediction);
  ordered_json rules = ordered_json::array();
  for (const Rule& r : rs.rules) {
    ordered_json conditions = ordered_json::array();
    for (const Condition& c : r.conditions) {
      ordered_json jc;
      jc["feature"] = c.feature;
      if (c.is_interval()) {
        jc["kind"] = "interval";
        jc["lower"] = bound_to_json(c.interval().lower);
        jc["upper"] = bound_to_json(c.interval().upper);
        jc["categories"] = nullptr;
      } else {
        jc["kind"] = "member_of";
        jc["lower"] = nullptr;
        jc["upper"] = nullptr;
        jc["categories"] = c.member_of().categories;
      }
      conditions.push_back(std::move(jc));
    }
    ordered_json jr;
    jr["conditions"] = std::move(conditions);
    jr["prediction"] = prediction_to_json(rs, r.prediction);
    rules.push_back(std::move(jr));
  }
  doc["rules"] = std::move(rules);
  return doc;
}

RuleSet parse_rules(const json& doc, const ImportOptions& options) {
  if (!doc.is_object()) schema_error("$", "expected an object");
  auto task_it = doc.find("task");
  if (task_it == doc.end() || !task_it->is_string()) schema_error("task", "expected a string");
  auto task = parse_task(task_it->get<std::string>());
  if (!task) schema_error("task", fmt::format("unknown task '{}'", task_it->get<std::string>()));

  auto rules_it = doc.find("rules");
  if (rules_it == doc.end() || !rules_it->is_array()) schema_error("rules", "expected an array");
  auto default_it = doc.find("default_prediction");
  if (default_it == doc.end() || default_it->is_null()) schema_error("default_prediction", "missing");

  RuleSet rs;
  rs.task = *task;

  // Raw predictions first; classification labels are coded once all are known.
  std::vector<json> raw_predictions;
  for (std::size_t i = 0; i < rules_it->size(); ++i) {
    const json& jr = (*rules_it)[i];
    const std::string where = fmt::format("rules[{}]", i);
    if (!jr.is_object()) schema_error(where, "expected an object");
    auto conds = jr.find("conditions");
    if (conds == jr.end() || !conds->is_array()) schema_error(where + ".conditions", "expected an array");
    auto pred = jr.find("prediction");
    if (pred == jr.end() || pred->is_null()) schema_error(where + ".prediction", "missing");

    Rule rule;
    for (std::size_t j = 0; j < conds->size(); ++j) {
      rule.conditions.push_back(parse_condition((*conds)[j], fmt::format("{}.conditions[{}]", where, j)));
    }
    try {
      rule = canonicalize(rule, options.schema);
    } catch (const Error& e) {
      ErrorCode code = e.code() == ErrorCode::ContradictoryRule ? ErrorCode::ContradictoryRule : ErrorCode::SchemaError;
      throw Error(code, fmt::format("{}: {}", where, e.what()));
    }
    rs.rules.push_back(std::move(rule));
    raw_predictions.push_back(*pred);
  }

  if (rs.task == TaskKind::Regression) {
    auto number = [](const json& v, const std::string& where) {
      if (!v.is_number()) schema_error(where, "regression prediction must be a number");
      return v.get<double>();
    };
    rs.default_prediction = number(*default_it, "default_prediction");
    for (std::size_t i = 0; i < rs.rules.size(); ++i) {
      rs.rules[i].prediction = number(raw_predictions[i], fmt::format("rules[{}].prediction", i));
    }
    return rs;
  }

  std::vector<std::string> labels;
  labels.push_back(label_of(*default_it, "default_prediction"));
  for (std::size_t i = 0; i < raw_predictions.size(); ++i) {
    labels.push_back(label_of(raw_predictions[i], fmt::format("rules[{}].prediction", i)));
  }
  rs.classes = options.classes.empty() ? sort_labels(labels) : options.classes;
  auto code_of = [&](const std::string& label, const std::string& where) {
    auto it = std::find(rs.classes.begin(), rs.classes.end(), label);
    if (it == rs.classes.end()) schema_error(where, fmt::format("unknown class label '{}'", label));
    return static_cast<double>(it - rs.classes.begin());
  };
  rs.default_prediction = code_of(labels[0], "default_prediction");
  for (std::size_t i = 0; i < rs.rules.size(); ++i) {
    rs.rules[i].prediction = code_of(labels[i + 1], fmt::format("rules[{}].prediction", i));
  }
  return rs;
}

RuleSet import_rules(const std::string& path, const ImportOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, fmt::format("{}: cannot open file", path));
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SchemaError, fmt::format("{}: invalid JSON: {}", path, e.what()));
  }
  try {
    return parse_rules(doc, options);
  } catch (const Error& e) {
    throw Error(e.code(), fmt::format("{}: {}", path, e.what()));
  }
}

void write_rules(const RuleSet& rs, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, fmt::format("{}: cannot write file", path));
  out << export_rules(rs).dump(2) << '\n';
}

}  // namespace rulescore
