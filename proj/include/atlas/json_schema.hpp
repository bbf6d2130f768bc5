#pragma once

#include "json.hpp"

#include <string>
#include <vector>

namespace atlas {

/// Validates `instance` against a JSON Schema document. Covers the subset the
/// shipped schemas use: type, enum, const, properties, required,
/// additionalProperties, patternProperties, items, minItems, maxItems,
/// minimum, maximum, minLength, pattern and local "$ref": "#/definitions/...".
/// Returns one message per violation, each prefixed with a JSON pointer.
std::vector<std::string> validate_json_schema(const nlohmann::json& instance,
                                              const nlohmann::json& schema);

}  // namespace atlas
