#pragma once

#include <stdexcept>
#include <string>

namespace csx {

// Base for all framework errors. Subclasses map onto the CLI exit codes:
// ConfigError -> 2, SchemaError/ScriptError -> 3, ExtensionError -> 4,
// SimulationError (and anything else) -> 5.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad invocation: unknown flags, missing/unreadable input files, malformed
// framework configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

// The schema document itself is unusable (malformed, unresolved $ref,
// unsupported keyword).
class SchemaError : public Error {
public:
    using Error::Error;
};

// Extension resolution or construction failed.
class ExtensionError : public Error {
public:
    ExtensionError(std::string className, const std::string& message)
        : Error(message), class_name_(std::move(className)) {}

    const std::string& class_name() const noexcept { return class_name_; }

private:
    std::string class_name_;
};

// Failure while executing the simulation itself.
class SimulationError : public Error {
public:
    using Error::Error;
};

} // namespace csx
