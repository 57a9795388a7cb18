// csx: runs a system-model script through schema validation, translation,
// and simulation, then writes the cloudlet report.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "csx/report/writer.hpp"
#include "csx/schema/model.hpp"
#include "csx/translation/config.hpp"
#include "csx/translation/manager.hpp"

namespace {

constexpr int kExitBadArguments = 2;
constexpr int kExitValidation = 3;
constexpr int kExitExtension = 4;
constexpr int kExitRuntime = 5;

void print_error(const char* klass, const std::string& message) {
    // First line is machine parsable; issue details follow when present.
    const std::size_t eol = message.find('\n');
    std::cerr << "error=" << klass << ": " << message.substr(0, eol) << "\n";
    if (eol != std::string::npos) {
        std::cerr << message.substr(eol + 1) << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"script-driven cloud datacenter simulator"};
    std::string scriptFlag, schemaFlag, configFlag, extensionsFlag;
    std::string outPath = "report.csv";
    std::string formatFlag = "csv";
    app.add_option("--script", scriptFlag, "system model script (YAML)");
    app.add_option("--schema", schemaFlag, "component schema document (YAML)");
    app.add_option("--config", configFlag, "framework config file (key = value)");
    app.add_option("--extensions-dir", extensionsFlag,
                   "directory with extension artifacts (*.so)");
    app.add_option("--out", outPath, "report output path (default report.csv)");
    app.add_option("--format", formatFlag, "report format: csv or json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error("bad-arguments", e.what());
        return kExitBadArguments;
    }

    try {
        csx::translation::FrameworkConfig config;
        if (!configFlag.empty()) {
            config = csx::translation::FrameworkConfig::load(configFlag);
        }

        // Flags beat config values; the env var is the weakest default for
        // the extensions directory.
        const std::string script =
            !scriptFlag.empty() ? scriptFlag : config.scriptFile;
        const std::string schema =
            !schemaFlag.empty() ? schemaFlag : config.schemaFile;
        std::string extensions =
            !extensionsFlag.empty() ? extensionsFlag : config.extensionsDir;
        if (extensions.empty()) {
            if (const char* env = std::getenv("CSX_EXTENSIONS_DIR")) {
                extensions = env;
            }
        }

        if (script.empty()) {
            throw csx::ConfigError("no script given (use --script or scriptFile)");
        }
        if (schema.empty()) {
            throw csx::ConfigError("no schema given (use --schema or schemaFile)");
        }
        if (!std::filesystem::exists(script)) {
            throw csx::ConfigError("script file not found: " + script);
        }
        if (!std::filesystem::exists(schema)) {
            throw csx::ConfigError("schema file not found: " + schema);
        }
        const auto format = csx::report::parse_format(formatFlag);

        csx::translation::RunOptions options;
        options.schemaFile = schema;
        options.extensionsDir = extensions;
        options.handlerOverrides = config.handlerOverrides;

        csx::translation::SimulationManager manager(std::move(options));
        const auto report = manager.run_script_file(script);
        csx::report::write_report(report, format, outPath);
        return 0;
    } catch (const csx::ConfigError& e) {
        print_error("bad-arguments", e.what());
        return kExitBadArguments;
    } catch (const csx::schema::ScriptError& e) {
        print_error("validation", e.what());
        return kExitValidation;
    } catch (const csx::SchemaError& e) {
        print_error("validation", e.what());
        return kExitValidation;
    } catch (const csx::ExtensionError& e) {
        print_error("extension", e.what());
        return kExitExtension;
    } catch (const std::exception& e) {
        print_error("runtime", e.what());
        return kExitRuntime;
    }
}
