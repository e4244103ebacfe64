#pragma once

// Validator for the subset of JSON Schema used by the shipped schemas:
// type, enum, required, properties, additionalProperties (boolean), items,
// minItems, maxItems, minimum, exclusiveMinimum and local "#/definitions" refs.

#include <optional>
#include <string>

#include <json.hpp>

namespace sl2orbit::cli {

struct SchemaViolation {
    std::string path;  ///< JSON pointer into the instance
    std::string message;
};

std::optional<SchemaViolation> validate(const nlohmann::json& instance, const nlohmann::json& schema);

}  // namespace sl2orbit::cli
