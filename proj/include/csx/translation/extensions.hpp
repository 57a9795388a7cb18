#pragma once

#include <algorithm>
#include <any>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <typeinfo>
#include <vector>

#include <dlfcn.h>

#include "csx/errors.hpp"
#include "csx/schema/model.hpp"

namespace csx::translation {

// Names a runtime-materialized implementation variant, as written in a
// script's `variant`/`vmAllocationPolicy` blocks. The `className` field name
// is kept verbatim for script compatibility.
struct ExtensionRef {
    std::string className;
    std::map<std::string, std::string> extensionProperties;
};

// Ordered constructor arguments plus the script-side extensionProperties,
// handed to a factory. Factories document their expected arity.
class FactoryArgs {
public:
    FactoryArgs() = default;
    FactoryArgs(std::vector<std::any> positional,
                std::map<std::string, std::string> properties)
        : positional_(std::move(positional)), properties_(std::move(properties)) {}

    std::size_t size() const noexcept { return positional_.size(); }

    template <typename T>
    const T& get(std::size_t index) const {
        if (index >= positional_.size()) {
            throw Error("factory expected at least " + std::to_string(index + 1) +
                        " constructor argument(s), got " +
                        std::to_string(positional_.size()));
        }
        const T* value = std::any_cast<T>(&positional_[index]);
        if (!value) {
            throw Error("constructor argument " + std::to_string(index) +
                        " has unexpected type (wanted " + typeid(T).name() + ")");
        }
        return *value;
    }

    const std::map<std::string, std::string>& properties() const noexcept {
        return properties_;
    }

    std::string property_or(const std::string& key, std::string fallback) const {
        auto it = properties_.find(key);
        return it == properties_.end() ? std::move(fallback) : it->second;
    }

private:
    std::vector<std::any> positional_;
    std::map<std::string, std::string> properties_;
};

using ExtensionFactory = std::function<std::any(const FactoryArgs&)>;

// Entry point every extension artifact must export:
//   extern "C" void csx_register_extensions(csx::translation::ExtensionsCatalog&);
inline constexpr const char* kExtensionEntrySymbol = "csx_register_extensions";

// Name-keyed factory service. Populated once at startup from built-in
// registrations plus extension artifacts (shared libraries) discovered in
// the configured extensions directory; immutable afterwards, hence shareable
// across concurrent simulations. Lookup is exact-match on className; a later
// registration under the same name replaces the earlier one, which is how
// extensions override built-ins.
class ExtensionsCatalog {
public:
    void register_factory(std::string className, ExtensionFactory factory) {
        factories_[std::move(className)] = std::move(factory);
    }

    bool contains(const std::string& className) const {
        return factories_.count(className) != 0;
    }

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        out.reserve(factories_.size());
        for (const auto& [name, factory] : factories_) out.push_back(name);
        return out;
    }

    // Returns a fresh instance from the factory registered under
    // ref.className.
    std::any materialize(const ExtensionRef& ref,
                         std::vector<std::any> constructorArgs = {}) const {
        auto it = factories_.find(ref.className);
        if (it == factories_.end()) {
            throw ExtensionError(ref.className,
                                 "unknown extension '" + ref.className + "'");
        }
        const FactoryArgs args(std::move(constructorArgs), ref.extensionProperties);
        try {
            return it->second(args);
        } catch (const ExtensionError&) {
            throw;
        } catch (const std::exception& e) {
            throw ExtensionError(ref.className, "extension '" + ref.className +
                                                    "' construction failed: " +
                                                    e.what());
        }
    }

    template <typename Interface>
    std::shared_ptr<Interface> materialize_as(
        const ExtensionRef& ref, std::vector<std::any> constructorArgs = {}) const {
        std::any instance = materialize(ref, std::move(constructorArgs));
        if (auto* typed = std::any_cast<std::shared_ptr<Interface>>(&instance)) {
            return *typed;
        }
        throw ExtensionError(ref.className,
                             "extension '" + ref.className +
                                 "' produced an instance of an unexpected type");
    }

    // Loads every *.so in `dir` (sorted by filename) and invokes its
    // registration entry point. Handles stay open for the life of the
    // process; instances created by the factories reference their code.
    void load_directory(const std::filesystem::path& dir) {
        if (!std::filesystem::is_directory(dir)) {
            throw ConfigError("extensions directory does not exist: " + dir.string());
        }
        std::vector<std::filesystem::path> artifacts;
        for (const auto& entry : std::filesystem::directory_iterator(dir)) {
            if (entry.is_regular_file() && entry.path().extension() == ".so") {
                artifacts.push_back(entry.path());
            }
        }
        std::sort(artifacts.begin(), artifacts.end());
        for (const auto& artifact : artifacts) {
            load_artifact(artifact);
        }
    }

    void load_artifact(const std::filesystem::path& artifact) {
        void* handle = dlopen(artifact.c_str(), RTLD_NOW | RTLD_LOCAL);
        if (!handle) {
            const char* why = dlerror();
            throw ExtensionError(artifact.string(),
                                 "failed to load extension artifact " +
                                     artifact.string() + ": " +
                                     (why ? why : "unknown dlopen failure"));
        }
        using EntryPoint = void (*)(ExtensionsCatalog&);
        auto entry =
            reinterpret_cast<EntryPoint>(dlsym(handle, kExtensionEntrySymbol));
        if (!entry) {
            throw ExtensionError(artifact.string(),
                                 "extension artifact " + artifact.string() +
                                     " does not export " + kExtensionEntrySymbol);
        }
        entry(*this);
        handles_.push_back(handle);
    }

private:
    std::map<std::string, ExtensionFactory> factories_;
    std::vector<void*> handles_;
};

} // namespace csx::translation
