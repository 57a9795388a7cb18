#pragma once

#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "csx/schema/model.hpp"

namespace csx::schema {

namespace detail {

inline const char kRefPrefix[] = "#/components/schemas/";

inline bool keyword_allowed(SchemaKind kind, const std::string& key) {
    // Informational keywords are accepted everywhere; everything else must be
    // structural and kind-appropriate. Unknown keywords are rejected loudly
    // rather than half-implemented.
    if (key == "description" || key == "title" || key == "example") return true;
    if (key == "type") return true;
    switch (kind) {
        case SchemaKind::Object:
            return key == "properties" || key == "required" ||
                   key == "additionalProperties";
        case SchemaKind::Array:
            return key == "items";
        default:
            return false;
    }
}

inline Schema parse_schema(const YAML::Node& node, const std::string& where) {
    if (!node.IsMap()) {
        throw SchemaError("schema at " + where + " must be a mapping");
    }

    if (node["$ref"]) {
        if (node.size() != 1) {
            throw SchemaError("$ref at " + where + " must not carry sibling keys");
        }
        const std::string ref = node["$ref"].as<std::string>();
        if (ref.rfind(kRefPrefix, 0) != 0 || ref.size() <= sizeof(kRefPrefix) - 1) {
            throw SchemaError("unsupported $ref form '" + ref + "' at " + where +
                              " (expected '" + kRefPrefix + "<Name>')");
        }
        Schema schema;
        schema.kind = SchemaKind::Ref;
        schema.refTarget = ref.substr(sizeof(kRefPrefix) - 1);
        return schema;
    }

    const YAML::Node typeNode = node["type"];
    if (!typeNode || !typeNode.IsScalar()) {
        throw SchemaError("schema at " + where + " needs a 'type' (or '$ref')");
    }
    const std::string type = typeNode.Scalar();

    Schema schema;
    if (type == "object") schema.kind = SchemaKind::Object;
    else if (type == "array") schema.kind = SchemaKind::Array;
    else if (type == "string") schema.kind = SchemaKind::String;
    else if (type == "integer") schema.kind = SchemaKind::Integer;
    else if (type == "number") schema.kind = SchemaKind::Number;
    else if (type == "boolean") schema.kind = SchemaKind::Boolean;
    else {
        throw SchemaError("unsupported schema type '" + type + "' at " + where);
    }

    for (const auto& kv : node) {
        const std::string key = kv.first.as<std::string>();
        if (!keyword_allowed(schema.kind, key)) {
            throw SchemaError("unsupported schema keyword '" + key + "' at " +
                              where);
        }
    }

    if (schema.kind == SchemaKind::Object) {
        if (const YAML::Node props = node["properties"]) {
            if (!props.IsMap()) {
                throw SchemaError("'properties' at " + where + " must be a mapping");
            }
            for (const auto& kv : props) {
                const std::string name = kv.first.as<std::string>();
                schema.properties.emplace_back(
                    name, parse_schema(kv.second, where + "/properties/" + name));
            }
        }
        if (const YAML::Node req = node["required"]) {
            if (!req.IsSequence()) {
                throw SchemaError("'required' at " + where + " must be a sequence");
            }
            for (const auto& item : req) {
                schema.required.push_back(item.as<std::string>());
            }
        }
        if (const YAML::Node extra = node["additionalProperties"]) {
            schema.additionalProperties = std::make_shared<const Schema>(
                parse_schema(extra, where + "/additionalProperties"));
        }
    } else if (schema.kind == SchemaKind::Array) {
        const YAML::Node items = node["items"];
        if (!items) {
            throw SchemaError("array schema at " + where + " needs 'items'");
        }
        schema.items =
            std::make_shared<const Schema>(parse_schema(items, where + "/items"));
    }
    return schema;
}

inline void check_refs(const Schema& schema, const SchemaDocument& doc,
                       const std::string& where) {
    switch (schema.kind) {
        case SchemaKind::Ref:
            if (!doc.contains(schema.refTarget)) {
                throw SchemaError("unresolved $ref '" + std::string(kRefPrefix) +
                                  schema.refTarget + "' in " + where);
            }
            break;
        case SchemaKind::Object:
            for (const auto& [name, prop] : schema.properties) {
                check_refs(prop, doc, where + "/" + name);
            }
            if (schema.additionalProperties) {
                check_refs(*schema.additionalProperties, doc,
                           where + "/additionalProperties");
            }
            break;
        case SchemaKind::Array:
            check_refs(*schema.items, doc, where + "/items");
            break;
        default:
            break;
    }
}

} // namespace detail

// Loads the components/schemas section of an OpenAPI-3.0-subset document.
// Every $ref must resolve within the document.
inline SchemaDocument load_schema(const std::string& documentText) {
    YAML::Node root;
    try {
        root = YAML::Load(documentText);
    } catch (const YAML::Exception& e) {
        throw SchemaError(std::string("schema document is not valid YAML: ") +
                          e.what());
    }

    SchemaDocument doc;
    if (!root.IsDefined() || root.IsNull()) return doc;
    if (!root.IsMap()) {
        throw SchemaError("schema document root must be a mapping");
    }
    const YAML::Node components = root["components"];
    if (!components || components.IsNull()) return doc;
    const YAML::Node schemas = components["schemas"];
    if (!schemas || schemas.IsNull()) return doc;
    if (!schemas.IsMap()) {
        throw SchemaError("'components/schemas' must be a mapping");
    }

    for (const auto& kv : schemas) {
        const std::string name = kv.first.as<std::string>();
        doc.schemas.emplace(name, detail::parse_schema(kv.second, name));
    }
    for (const auto& [name, schema] : doc.schemas) {
        detail::check_refs(schema, doc, name);
    }
    return doc;
}

} // namespace csx::schema
