#pragma once

#include <json.hpp>

namespace heatlab {

/// Validator for the subset of JSON Schema used by the run configuration:
/// type, enum, minimum/maximum (exclusive or not), properties, required,
/// additionalProperties: false, items, minItems/maxItems and default.
/// Any other keyword in the schema is rejected at construction so the
/// published schema cannot silently rely on unsupported features.
class SchemaValidator {
public:
    explicit SchemaValidator(nlohmann::json schema);

    /// Returns the instance with every missing defaulted property filled in.
    /// Throws InvalidArgument naming the JSON pointer of the first violation.
    nlohmann::json apply(nlohmann::json instance) const;

    const nlohmann::json& schema() const noexcept { return schema_; }

private:
    nlohmann::json schema_;
};

}  // namespace heatlab
