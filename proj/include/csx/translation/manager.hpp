#pragma once

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>

#include <yaml-cpp/yaml.h>

#include "csx/report/report.hpp"
#include "csx/schema/loader.hpp"
#include "csx/schema/parser.hpp"
#include "csx/translation/extensions.hpp"
#include "csx/translation/handlers.hpp"

namespace csx::translation {

inline constexpr const char* kRootElement = "GlobalDatacenterNetwork";

// Parses the script into the root component and materializes its handler.
// Every top-level key other than the root element is treated as a reusable
// (anchored) component definition and left alone.
class EnvironmentResolver {
public:
    static std::shared_ptr<ElementHandler> parse(const std::string& scriptText,
                                                 TranslationContext& ctx) {
        YAML::Node root;
        try {
            root = YAML::Load(scriptText);
        } catch (const YAML::Exception& e) {
            const std::string what = e.what();
            if (what.find("anchor") != std::string::npos ||
                what.find("alias") != std::string::npos) {
                throw schema::ScriptError(
                    "script references an undefined anchor",
                    {schema::ValidationIssue{"/", schema::IssueCode::BadAnchor, what}});
            }
            throw schema::ScriptError("script is not valid YAML: " + what);
        }

        if (!root.IsMap() || !root[kRootElement] || root[kRootElement].IsNull()) {
            throw schema::ScriptError(
                "script must define the root element '" +
                    std::string(kRootElement) + "'",
                {schema::ValidationIssue{std::string("/") + kRootElement,
                                         schema::IssueCode::MissingRequired,
                                         "root element not found"}});
        }

        auto parsed = schema::parse_component(root[kRootElement], kRootElement,
                                              ctx.schemaDoc,
                                              std::string("/") + kRootElement);
        if (!parsed.ok()) {
            const std::size_t count = parsed.issues.size();
            throw schema::ScriptError("script failed validation (" +
                                          std::to_string(count) + " issue(s))",
                                      std::move(parsed.issues));
        }

        auto handler = ctx.registry.resolve(kRootElement, ctx.catalog);
        handler->init(std::move(*parsed.node), ctx);
        return handler;
    }
};

// Runs the root handler; the recursion registers every produced entity with
// the kernel through the shared context. Failures are re-raised with the
// component-tree path at which the build stopped.
class ScenarioManager {
public:
    static void build(ElementHandler& root, TranslationContext& ctx) {
        try {
            root.handle();
        } catch (...) {
            if (!ctx.path.empty()) {
                detail::rethrow_at(detail::join_path(ctx.path));
            }
            throw;
        }
    }
};

struct RunOptions {
    std::filesystem::path schemaFile;
    std::filesystem::path extensionsDir; // empty: no extension artifacts
    std::map<std::string, std::string> handlerOverrides;
    // Embedding hook, applied after the built-ins and before artifacts load.
    std::function<void(ExtensionsCatalog&)> extraRegistrations;
};

// Drives the whole lifecycle: catalog/registry initialization once, then per
// run: parse, build, execute, report.
class SimulationManager {
public:
    explicit SimulationManager(RunOptions options) : options_(std::move(options)) {
        register_builtin_extensions(catalog_);
        if (options_.extraRegistrations) {
            options_.extraRegistrations(catalog_);
        }
        if (!options_.extensionsDir.empty()) {
            catalog_.load_directory(options_.extensionsDir);
        }
        // Overrides go in front of the built-ins; first match wins.
        for (const auto& [schemaName, className] : options_.handlerOverrides) {
            registry_.register_handler(schemaName, className);
        }
        register_builtin_handlers(registry_);
    }

    const ExtensionsCatalog& catalog() const noexcept { return catalog_; }
    const HandlerRegistry& registry() const noexcept { return registry_; }

    report::SimulationReport run_script_file(const std::filesystem::path& path) {
        const auto start = std::chrono::steady_clock::now();
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            throw ConfigError("cannot read script file: " + path.string());
        }
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        return run(std::move(text), start);
    }

    report::SimulationReport run_script_text(const std::string& scriptText) {
        return run(scriptText, std::chrono::steady_clock::now());
    }

private:
    report::SimulationReport run(std::string scriptText,
                                 std::chrono::steady_clock::time_point start) {
        if (!std::filesystem::exists(options_.schemaFile)) {
            throw ConfigError("schema file not found: " +
                              options_.schemaFile.string());
        }
        std::ifstream in(options_.schemaFile, std::ios::binary);
        if (!in) {
            throw ConfigError("cannot read schema file: " +
                              options_.schemaFile.string());
        }
        const std::string schemaText((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
        const schema::SchemaDocument schemaDoc = schema::load_schema(schemaText);

        sim::Simulation kernel;
        TranslationContext ctx{kernel, schemaDoc, catalog_, registry_, {}, {}, {}};

        auto root = EnvironmentResolver::parse(scriptText, ctx);
        ScenarioManager::build(*root, ctx);

        report::SimulationReport report;
        report.overheadMs = std::chrono::duration_cast<std::chrono::milliseconds>(
                                std::chrono::steady_clock::now() - start)
                                .count();

        try {
            report.finalClock = kernel.run();
        } catch (const Error&) {
            throw;
        } catch (const std::exception& e) {
            throw SimulationError("simulation failed at t=" +
                                  std::to_string(kernel.clock()) + ": " + e.what());
        }

        for (const auto& broker : ctx.brokers) {
            for (const cloud::CloudletRecord& row : broker->results()) {
                report.cloudlets.push_back(row);
            }
            for (const cloud::VmPlacement& placement : broker->placements()) {
                report.placements.push_back(placement);
            }
        }
        std::sort(report.cloudlets.begin(), report.cloudlets.end(),
                  [](const cloud::CloudletRecord& a, const cloud::CloudletRecord& b) {
                      if (a.cloudletId != b.cloudletId) {
                          return a.cloudletId < b.cloudletId;
                      }
                      if (a.datacenterId != b.datacenterId) {
                          return a.datacenterId < b.datacenterId;
                      }
                      return a.vmId < b.vmId;
                  });
        std::sort(report.placements.begin(), report.placements.end(),
                  [](const cloud::VmPlacement& a, const cloud::VmPlacement& b) {
                      if (a.vmId != b.vmId) return a.vmId < b.vmId;
                      return a.datacenterId < b.datacenterId;
                  });
        for (const auto& dc : ctx.datacenters) {
            for (const cloud::MonitorSample& sample : dc->monitor_samples()) {
                report.samples.push_back(sample);
            }
        }
        return report;
    }

    RunOptions options_;
    ExtensionsCatalog catalog_;
    HandlerRegistry registry_;
};

} // namespace csx::translation
