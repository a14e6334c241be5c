#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "subaudit/fuzzy/variable.hpp"

namespace subaudit::fuzzy {

/// Variable definitions document:
///
///   {"variables": [{"name": "P_cum", "kind": "input", "universe": [0, 1],
///                   "resolution": 2001,
///                   "terms": [{"name": "Low", "shape": "trapezoid",
///                              "params": [0, 0, 0.1, 0.35]}]}]}
///
/// Extra keys are ignored here. Throws SchemaError on malformed documents.
std::vector<LinguisticVariable> variables_from_json(const nlohmann::json& doc);
nlohmann::ordered_json variables_to_json(const std::vector<LinguisticVariable>& variables);

}  // namespace subaudit::fuzzy
