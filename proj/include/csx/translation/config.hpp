#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include "csx/errors.hpp"

namespace csx::translation {

// Framework configuration: `key = value` lines, '#' starts a comment.
// Recognized keys: schemaFile, extensionsDir, scriptFile, and
// handlerOverride.<SchemaName> (framework self-extension by name).
struct FrameworkConfig {
    std::string schemaFile;
    std::string extensionsDir;
    std::string scriptFile;
    std::map<std::string, std::string> handlerOverrides;

    static FrameworkConfig parse(const std::string& text,
                                 const std::string& origin = "<config>") {
        FrameworkConfig config;
        std::size_t lineNo = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const std::size_t eol = text.find('\n', pos);
            std::string line = text.substr(
                pos, eol == std::string::npos ? std::string::npos : eol - pos);
            pos = eol == std::string::npos ? text.size() + 1 : eol + 1;
            ++lineNo;

            if (const std::size_t hash = line.find('#'); hash != std::string::npos) {
                line.erase(hash);
            }
            const std::string trimmed = trim(line);
            if (trimmed.empty()) continue;

            const std::size_t eq = trimmed.find('=');
            if (eq == std::string::npos) {
                throw ConfigError(origin + ":" + std::to_string(lineNo) +
                                  ": expected 'key = value'");
            }
            const std::string key = trim(trimmed.substr(0, eq));
            const std::string value = trim(trimmed.substr(eq + 1));

            if (key == "schemaFile") {
                config.schemaFile = value;
            } else if (key == "extensionsDir") {
                config.extensionsDir = value;
            } else if (key == "scriptFile") {
                config.scriptFile = value;
            } else if (key.rfind("handlerOverride.", 0) == 0) {
                const std::string schemaName = key.substr(sizeof("handlerOverride.") - 1);
                if (schemaName.empty() || value.empty()) {
                    throw ConfigError(origin + ":" + std::to_string(lineNo) +
                                      ": handlerOverride needs a schema name and a class name");
                }
                config.handlerOverrides[schemaName] = value;
            } else {
                throw ConfigError(origin + ":" + std::to_string(lineNo) +
                                  ": unknown key '" + key +
                                  "' (known: schemaFile, extensionsDir, scriptFile, "
                                  "handlerOverride.<SchemaName>)");
            }
        }
        return config;
    }

    static FrameworkConfig load(const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            throw ConfigError("cannot read config file: " + path.string());
        }
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        return parse(text, path.string());
    }

private:
    static std::string trim(const std::string& s) {
        std::size_t begin = 0;
        std::size_t end = s.size();
        while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) {
            ++begin;
        }
        while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) {
            --end;
        }
        return s.substr(begin, end - begin);
    }
};

} // namespace csx::translation
