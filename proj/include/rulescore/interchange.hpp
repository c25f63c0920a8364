#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "rulescore/rules.hpp"
#include "rulescore/schema.hpp"

namespace rulescore {

/// Serializes a rule set to the interchange JSON. Unbounded interval ends
/// are written as null; classification predictions as class labels.
nlohmann::ordered_json export_rules(const RuleSet& rs);

struct ImportOptions {
  // When set, conditions are validated and canonicalized against it.
  const Schema* schema = nullptr;
  // Class labels of the scoring dataset. Classification predictions are
  // coded against these; an unknown label is a SchemaError. When empty the
  // labels found in the file are used, sorted.
  std::vector<std::string> classes;
};

/// Parses and canonicalizes the interchange JSON.
/// Throws SchemaError (naming the rule index) or ContradictoryRule.
RuleSet parse_rules(const nlohmann::json& doc, const ImportOptions& options = {});
RuleSet import_rules(const std::string& path, const ImportOptions& options = {});

void write_rules(const RuleSet& rs, const std::string& path);

}  // namespace rulescore
