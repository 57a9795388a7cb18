#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "csx/errors.hpp"

namespace csx::schema {

// ---------------------------------------------------------------------------
// Schema side: the supported OpenAPI 3.0 subset.
// ---------------------------------------------------------------------------

enum class SchemaKind { Object, Array, String, Integer, Number, Boolean, Ref };

inline const char* to_string(SchemaKind k) noexcept {
    switch (k) {
        case SchemaKind::Object: return "object";
        case SchemaKind::Array: return "array";
        case SchemaKind::String: return "string";
        case SchemaKind::Integer: return "integer";
        case SchemaKind::Number: return "number";
        case SchemaKind::Boolean: return "boolean";
        case SchemaKind::Ref: return "$ref";
    }
    return "?";
}

struct Schema {
    SchemaKind kind = SchemaKind::Object;
    // object
    std::vector<std::pair<std::string, Schema>> properties;
    std::vector<std::string> required;
    std::shared_ptr<const Schema> additionalProperties; // open key-value maps
    // array
    std::shared_ptr<const Schema> items;
    // ref
    std::string refTarget;
};

struct SchemaDocument {
    std::map<std::string, Schema> schemas;

    bool contains(const std::string& name) const {
        return schemas.count(name) != 0;
    }

    const Schema& at(const std::string& name) const {
        auto it = schemas.find(name);
        if (it == schemas.end()) {
            throw SchemaError("unknown schema '" + name + "'");
        }
        return it->second;
    }
};

// ---------------------------------------------------------------------------
// Document side: a typed component tree parsed from a script.
// ---------------------------------------------------------------------------

enum class IssueCode {
    MissingRequired,
    TypeMismatch,
    UnknownField,
    UnresolvedRef,
    BadAnchor,
};

inline const char* to_string(IssueCode code) noexcept {
    switch (code) {
        case IssueCode::MissingRequired: return "missing-required";
        case IssueCode::TypeMismatch: return "type-mismatch";
        case IssueCode::UnknownField: return "unknown-field";
        case IssueCode::UnresolvedRef: return "unresolved-ref";
        case IssueCode::BadAnchor: return "bad-anchor";
    }
    return "?";
}

struct ValidationIssue {
    std::string path; // slash separated, "" is the fragment root
    IssueCode code = IssueCode::TypeMismatch;
    std::string message;

    bool operator==(const ValidationIssue& other) const {
        return path == other.path && code == other.code;
    }
};

class Value;

struct ComponentNode {
    std::string schemaName;
    std::vector<std::pair<std::string, Value>> fields; // document order

    const Value* find(const std::string& name) const;
    const Value& at(const std::string& name) const;
    bool has(const std::string& name) const { return find(name) != nullptr; }
};

class Value {
public:
    using Scalar = std::variant<std::string, std::int64_t, double, bool>;
    using List = std::vector<Value>;
    using Data = std::variant<Scalar, ComponentNode, List>;

    Value() : data_(Scalar{std::string{}}) {}
    explicit Value(Scalar s) : data_(std::move(s)) {}
    explicit Value(ComponentNode n) : data_(std::move(n)) {}
    explicit Value(List l) : data_(std::move(l)) {}

    bool is_scalar() const { return std::holds_alternative<Scalar>(data_); }
    bool is_node() const { return std::holds_alternative<ComponentNode>(data_); }
    bool is_list() const { return std::holds_alternative<List>(data_); }

    const Scalar& scalar() const { return std::get<Scalar>(data_); }
    const ComponentNode& node() const { return std::get<ComponentNode>(data_); }
    ComponentNode& node() { return std::get<ComponentNode>(data_); }
    const List& list() const { return std::get<List>(data_); }

    const std::string& as_string() const { return std::get<std::string>(scalar()); }
    std::int64_t as_int() const { return std::get<std::int64_t>(scalar()); }
    bool as_bool() const { return std::get<bool>(scalar()); }

    // Number fields are stored as double; integer fields as int64.
    double as_number() const {
        const Scalar& s = scalar();
        if (std::holds_alternative<double>(s)) return std::get<double>(s);
        return static_cast<double>(std::get<std::int64_t>(s));
    }

    const Data& data() const { return data_; }

private:
    Data data_;
};

inline const Value* ComponentNode::find(const std::string& name) const {
    for (const auto& [key, value] : fields) {
        if (key == name) return &value;
    }
    return nullptr;
}

inline const Value& ComponentNode::at(const std::string& name) const {
    if (const Value* v = find(name)) return *v;
    throw SimulationError("component '" + schemaName + "' has no field '" + name +
                          "'");
}

inline bool operator==(const Value& a, const Value& b);

inline bool operator==(const ComponentNode& a, const ComponentNode& b) {
    if (a.schemaName != b.schemaName || a.fields.size() != b.fields.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.fields.size(); ++i) {
        if (a.fields[i].first != b.fields[i].first ||
            !(a.fields[i].second == b.fields[i].second)) {
            return false;
        }
    }
    return true;
}

inline bool operator==(const Value& a, const Value& b) { return a.data() == b.data(); }

// Script-level failure carrying the full issue list.
class ScriptError : public Error {
public:
    explicit ScriptError(const std::string& message,
                         std::vector<ValidationIssue> issues = {})
        : Error(compose(message, issues)),
          brief_(message),
          issues_(std::move(issues)) {}

    const std::vector<ValidationIssue>& issues() const noexcept { return issues_; }

    // The headline message without the per-issue lines.
    const std::string& brief() const noexcept { return brief_; }

private:
    static std::string compose(const std::string& message,
                               const std::vector<ValidationIssue>& issues) {
        std::string out = message;
        for (const ValidationIssue& issue : issues) {
            out += "\n  ";
            out += issue.path.empty() ? "/" : issue.path;
            out += ": ";
            out += to_string(issue.code);
            out += ": ";
            out += issue.message;
        }
        return out;
    }

    std::string brief_;
    std::vector<ValidationIssue> issues_;
};

} // namespace csx::schema
