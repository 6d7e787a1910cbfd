#include "schema.hpp"

#include "errors.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace heatlab {

namespace {

using nlohmann::json;

const std::set<std::string> kKnownKeywords{
    "$schema", "$id", "title", "description", "type", "enum", "minimum", "maximum",
    "exclusiveMinimum", "exclusiveMaximum", "properties", "required", "additionalProperties",
    "items", "minItems", "maxItems", "default"};

void check_keywords(const json& s, const std::string& where)
{
    if (!s.is_object())
        throw InvalidArgument("schema at '" + where + "' is not an object");
    for (const auto& [key, value] : s.items()) {
        if (!kKnownKeywords.count(key))
            throw InvalidArgument("schema keyword '" + key + "' at '" + where + "' is not supported");
        if (key == "additionalProperties" && value != false)
            throw InvalidArgument("only additionalProperties: false is supported");
    }
    if (s.contains("properties"))
        for (const auto& [name, sub] : s["properties"].items())
            check_keywords(sub, where + "/properties/" + name);
    if (s.contains("items"))
        check_keywords(s["items"], where + "/items");
}

[[noreturn]] void fail(const std::string& path, const std::string& what)
{
    throw InvalidArgument("config " + (path.empty() ? std::string("/") : path) + ": " + what);
}

bool has_type(const json& v, const std::string& type)
{
    if (type == "object") return v.is_object();
    if (type == "array") return v.is_array();
    if (type == "string") return v.is_string();
    if (type == "boolean") return v.is_boolean();
    if (type == "number") return v.is_number();
    if (type == "integer") {
        if (v.is_number_integer())
            return true;
        // 2e6 is written as a float in JSON but is a perfectly good integer.
        if (v.is_number_float()) {
            const double d = v.get<double>();
            return std::isfinite(d) && std::floor(d) == d;
        }
        return false;
    }
    if (type == "null") return v.is_null();
    return false;
}

void walk(const json& s, json& v, const std::string& path)
{
    if (s.contains("type") && !has_type(v, s["type"].get<std::string>()))
        fail(path, "expected " + s["type"].get<std::string>() + ", got " + v.type_name());

    if (s.contains("enum")) {
        bool found = false;
        for (const auto& option : s["enum"])
            found = found || option == v;
        if (!found)
            fail(path, "value " + v.dump() + " is not one of " + s["enum"].dump());
    }

    if (v.is_number()) {
        const double x = v.get<double>();
        if (!std::isfinite(x))
            fail(path, "number is not finite");
        if (s.contains("minimum") && !(x >= s["minimum"].get<double>()))
            fail(path, v.dump() + " is below the minimum " + s["minimum"].dump());
        if (s.contains("maximum") && !(x <= s["maximum"].get<double>()))
            fail(path, v.dump() + " is above the maximum " + s["maximum"].dump());
        if (s.contains("exclusiveMinimum") && !(x > s["exclusiveMinimum"].get<double>()))
            fail(path, v.dump() + " must be greater than " + s["exclusiveMinimum"].dump());
        if (s.contains("exclusiveMaximum") && !(x < s["exclusiveMaximum"].get<double>()))
            fail(path, v.dump() + " must be less than " + s["exclusiveMaximum"].dump());
    }

    if (v.is_object()) {
        const json empty = json::object();
        const json& props = s.contains("properties") ? s["properties"] : empty;
        if (s.contains("additionalProperties"))
            for (const auto& [key, _] : v.items())
                if (!props.contains(key))
                    fail(path, "unknown key '" + key + "'");
        for (const auto& [key, sub] : props.items())
            if (!v.contains(key) && sub.contains("default"))
                v[key] = sub["default"];
        if (s.contains("required"))
            for (const auto& key : s["required"])
                if (!v.contains(key.get<std::string>()))
                    fail(path, "missing required key '" + key.get<std::string>() + "'");
        for (const auto& [key, sub] : props.items())
            if (v.contains(key))
                walk(sub, v[key], path + "/" + key);
    }

    if (v.is_array()) {
        if (s.contains("minItems") && v.size() < s["minItems"].get<std::size_t>())
            fail(path, "needs at least " + s["minItems"].dump() + " items");
        if (s.contains("maxItems") && v.size() > s["maxItems"].get<std::size_t>())
            fail(path, "allows at most " + s["maxItems"].dump() + " items");
        if (s.contains("items"))
            for (std::size_t i = 0; i < v.size(); ++i)
                walk(s["items"], v[i], path + "/" + std::to_string(i));
    }
}

}  // namespace

SchemaValidator::SchemaValidator(nlohmann::json schema) : schema_(std::move(schema))
{
    check_keywords(schema_, "#");
}

nlohmann::json SchemaValidator::apply(nlohmann::json instance) const
{
    walk(schema_, instance, "");
    return instance;
}

}  // namespace heatlab
