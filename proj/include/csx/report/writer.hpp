#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <json.hpp>

#include "csx/errors.hpp"
#include "csx/report/report.hpp"

namespace csx::report {

enum class OutputFormat { Csv, Json };

inline OutputFormat parse_format(const std::string& text) {
    if (text == "csv") return OutputFormat::Csv;
    if (text == "json") return OutputFormat::Json;
    throw ConfigError("unknown report format '" + text + "' (expected csv or json)");
}

namespace detail {

inline std::string fixed6(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    return buf;
}

} // namespace detail

// Columns and 6-decimal time formatting are fixed so reports diff cleanly.
inline std::string to_csv(const SimulationReport& report) {
    std::string out =
        "cloudlet_id,status,datacenter_id,vm_id,exec_time,start_time,finish_time\n";
    for (const cloud::CloudletRecord& row : report.cloudlets) {
        out += std::to_string(row.cloudletId);
        out += ',';
        out += cloud::to_string(row.status);
        out += ',';
        out += std::to_string(row.datacenterId);
        out += ',';
        out += std::to_string(row.vmId);
        out += ',';
        if (const auto exec = row.exec_time()) out += detail::fixed6(*exec);
        out += ',';
        if (row.startTime) out += detail::fixed6(*row.startTime);
        out += ',';
        if (row.finishTime) out += detail::fixed6(*row.finishTime);
        out += '\n';
    }
    return out;
}

inline std::string to_json(const SimulationReport& report) {
    nlohmann::ordered_json doc;
    doc["cloudlets"] = nlohmann::ordered_json::array();
    for (const cloud::CloudletRecord& row : report.cloudlets) {
        nlohmann::ordered_json j;
        j["cloudlet_id"] = row.cloudletId;
        j["status"] = cloud::to_string(row.status);
        j["datacenter_id"] = row.datacenterId;
        j["vm_id"] = row.vmId;
        if (const auto exec = row.exec_time()) j["exec_time"] = *exec;
        else j["exec_time"] = nullptr;
        if (row.startTime) j["start_time"] = *row.startTime;
        else j["start_time"] = nullptr;
        if (row.finishTime) j["finish_time"] = *row.finishTime;
        else j["finish_time"] = nullptr;
        doc["cloudlets"].push_back(std::move(j));
    }
    doc["final_clock"] = report.finalClock;
    doc["placements"] = nlohmann::ordered_json::array();
    for (const cloud::VmPlacement& p : report.placements) {
        nlohmann::ordered_json j;
        j["vm_id"] = p.vmId;
        j["datacenter_id"] = p.datacenterId;
        j["host_id"] = p.hostId;
        j["created"] = p.created;
        doc["placements"].push_back(std::move(j));
    }
    doc["samples"] = nlohmann::ordered_json::array();
    for (const cloud::MonitorSample& s : report.samples) {
        nlohmann::ordered_json j;
        j["time"] = s.time;
        j["vm_id"] = s.vmId;
        j["running_cloudlets"] = s.runningCloudlets;
        doc["samples"].push_back(std::move(j));
    }
    return doc.dump(2) + "\n";
}

// Writes the report file and prints the overhead metric to stdout.
inline void write_report(const SimulationReport& report, OutputFormat format,
                         const std::filesystem::path& path) {
    const std::string body =
        format == OutputFormat::Csv ? to_csv(report) : to_json(report);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw SimulationError("cannot write report to " + path.string());
    }
    out << body;
    out.close();
    if (!out) {
        throw SimulationError("failed while writing report to " + path.string());
    }
    std::cout << "overhead_ms=" << report.overheadMs << "\n";
}

} // namespace csx::report
