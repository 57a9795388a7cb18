#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "csx/schema/model.hpp"

namespace csx::schema {

namespace detail {

inline std::optional<std::int64_t> parse_int(const std::string& text) {
    if (text.empty()) return std::nullopt;
    std::int64_t value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) return std::nullopt;
    return value;
}

inline std::optional<double> parse_double(const std::string& text) {
    if (text.empty()) return std::nullopt;
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

// Accepts a whole-valued number for integer fields; document formats blur
// the integer/number distinction.
inline std::optional<std::int64_t> parse_integerish(const std::string& text) {
    if (auto i = parse_int(text)) return i;
    if (auto d = parse_double(text)) {
        if (std::trunc(*d) == *d && *d >= -9.2e18 && *d <= 9.2e18) {
            return static_cast<std::int64_t>(*d);
        }
    }
    return std::nullopt;
}

class ComponentParser {
public:
    explicit ComponentParser(const SchemaDocument& doc) : doc_(doc) {}

    std::optional<Value> walk(const YAML::Node& node, const Schema& schema,
                              const std::string& path,
                              const std::string& label) {
        switch (schema.kind) {
            case SchemaKind::Ref: {
                const Schema* target = lookup_ref(schema, path);
                if (!target) return std::nullopt;
                return walk(node, *target, path, schema.refTarget);
            }
            case SchemaKind::Object:
                return walk_object(node, schema, path, label);
            case SchemaKind::Array:
                return walk_array(node, schema, path, label);
            case SchemaKind::String:
                if (!node.IsScalar()) {
                    return mismatch(path, "expected a string");
                }
                return Value(Value::Scalar{node.Scalar()});
            case SchemaKind::Integer: {
                if (!node.IsScalar()) return mismatch(path, "expected an integer");
                if (auto v = parse_integerish(node.Scalar())) {
                    return Value(Value::Scalar{*v});
                }
                return mismatch(path, "'" + node.Scalar() + "' is not an integer");
            }
            case SchemaKind::Number: {
                if (!node.IsScalar()) return mismatch(path, "expected a number");
                if (auto v = parse_double(node.Scalar())) {
                    return Value(Value::Scalar{*v});
                }
                return mismatch(path, "'" + node.Scalar() + "' is not a number");
            }
            case SchemaKind::Boolean: {
                if (!node.IsScalar()) return mismatch(path, "expected a boolean");
                const std::string& s = node.Scalar();
                if (s == "true") return Value(Value::Scalar{true});
                if (s == "false") return Value(Value::Scalar{false});
                return mismatch(path, "'" + s + "' is not a boolean (true/false)");
            }
        }
        return std::nullopt;
    }

    std::vector<ValidationIssue> issues;

private:
    std::optional<Value> mismatch(const std::string& path, std::string message) {
        issues.push_back(
            ValidationIssue{path, IssueCode::TypeMismatch, std::move(message)});
        return std::nullopt;
    }

    const Schema* lookup_ref(const Schema& schema, const std::string& path) {
        if (!doc_.contains(schema.refTarget)) {
            issues.push_back(ValidationIssue{
                path, IssueCode::UnresolvedRef,
                "reference to unknown schema '" + schema.refTarget + "'"});
            return nullptr;
        }
        return &doc_.at(schema.refTarget);
    }

    std::optional<Value> walk_object(const YAML::Node& node, const Schema& schema,
                                     const std::string& path,
                                     const std::string& label) {
        if (!node.IsMap()) {
            return mismatch(path, "expected an object");
        }
        ComponentNode component;
        component.schemaName = label;
        bool complete = true;

        for (const auto& kv : node) {
            const std::string key = kv.first.as<std::string>();
            const std::string childPath = path + "/" + key;
            if (kv.second.IsNull()) continue; // a key with no value is absent

            const Schema* propSchema = nullptr;
            for (const auto& [name, prop] : schema.properties) {
                if (name == key) {
                    propSchema = &prop;
                    break;
                }
            }
            if (!propSchema && schema.additionalProperties) {
                propSchema = schema.additionalProperties.get();
            }
            if (!propSchema) {
                issues.push_back(ValidationIssue{childPath, IssueCode::UnknownField,
                                                 "unknown field '" + key + "'"});
                complete = false;
                continue;
            }
            auto child = walk(kv.second, *propSchema, childPath, label + "." + key);
            if (child) {
                component.fields.emplace_back(key, std::move(*child));
            } else {
                complete = false;
            }
        }

        for (const std::string& name : schema.required) {
            const YAML::Node present = node[name];
            if (!present || present.IsNull()) {
                issues.push_back(ValidationIssue{path + "/" + name,
                                                 IssueCode::MissingRequired,
                                                 "missing required field '" + name +
                                                     "'"});
                complete = false;
            }
        }

        if (!complete) return std::nullopt;
        return Value(std::move(component));
    }

    std::optional<Value> walk_array(const YAML::Node& node, const Schema& schema,
                                    const std::string& path,
                                    const std::string& label) {
        if (!node.IsSequence()) {
            return mismatch(path, "expected a list");
        }
        Value::List list;
        bool complete = true;
        std::size_t index = 0;
        for (const auto& item : node) {
            auto child = walk(item, *schema.items, path + "/" + std::to_string(index),
                              label + "[]");
            if (child) {
                list.push_back(std::move(*child));
            } else {
                complete = false;
            }
            ++index;
        }
        if (!complete) return std::nullopt;
        return Value(std::move(list));
    }

    const SchemaDocument& doc_;
};

} // namespace detail

struct ParseResult {
    std::optional<ComponentNode> node;
    std::vector<ValidationIssue> issues;

    bool ok() const { return node.has_value(); }
};

// Validates and types a parsed document fragment against the named schema.
// Anchors/aliases were already resolved by the document parser, so aliased
// components validate as inlined copies. `basePath` prefixes issue paths.
inline ParseResult parse_component(const YAML::Node& fragment,
                                   const std::string& schemaName,
                                   const SchemaDocument& doc,
                                   const std::string& basePath = "") {
    const Schema& schema = doc.at(schemaName);
    detail::ComponentParser parser(doc);
    auto value = parser.walk(fragment, schema, basePath, schemaName);

    ParseResult result;
    result.issues = std::move(parser.issues);
    if (value && result.issues.empty()) {
        if (!value->is_node()) {
            throw SchemaError("schema '" + schemaName +
                              "' does not describe an object component");
        }
        result.node = std::move(value->node());
    }
    return result;
}

// ---------------------------------------------------------------------------
// Serialization: flow-style (JSON-compatible) YAML, typed scalars preserved.
// ---------------------------------------------------------------------------

namespace detail {

inline void emit_string(std::string& out, const std::string& s) {
    out += '"';
    for (const char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

inline void emit_scalar(std::string& out, const Value::Scalar& scalar) {
    if (const auto* s = std::get_if<std::string>(&scalar)) {
        emit_string(out, *s);
    } else if (const auto* i = std::get_if<std::int64_t>(&scalar)) {
        out += std::to_string(*i);
    } else if (const auto* d = std::get_if<double>(&scalar)) {
        char buf[64];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), *d);
        out.append(buf, ptr);
    } else {
        out += std::get<bool>(scalar) ? "true" : "false";
    }
}

inline void emit_value(std::string& out, const Value& value);

inline void emit_node(std::string& out, const ComponentNode& node) {
    out += '{';
    bool first = true;
    for (const auto& [key, value] : node.fields) {
        if (!first) out += ", ";
        first = false;
        emit_string(out, key);
        out += ": ";
        emit_value(out, value);
    }
    out += '}';
}

inline void emit_value(std::string& out, const Value& value) {
    if (value.is_scalar()) {
        emit_scalar(out, value.scalar());
    } else if (value.is_node()) {
        emit_node(out, value.node());
    } else {
        out += '[';
        bool first = true;
        for (const Value& item : value.list()) {
            if (!first) out += ", ";
            first = false;
            emit_value(out, item);
        }
        out += ']';
    }
}

} // namespace detail

// Round-trippable: parsing the returned text against the node's schema gives
// back a structurally equal node.
inline std::string serialize_component(const ComponentNode& node) {
    std::string out;
    detail::emit_node(out, node);
    return out;
}

} // namespace csx::schema
