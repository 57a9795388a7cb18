#pragma once

#include <cstdint>
#include <vector>

#include "csx/cloud/broker.hpp"
#include "csx/cloud/datacenter.hpp"
#include "csx/sim/kernel.hpp"

namespace csx::report {

// Everything one simulation run produced. overheadMs covers script read
// through scenario build, never kernel execution; it stays out of the
// serialized report files so those remain byte-deterministic.
struct SimulationReport {
    std::vector<cloud::CloudletRecord> cloudlets; // sorted by cloudletId
    std::vector<cloud::VmPlacement> placements;   // sorted by vmId
    std::vector<cloud::MonitorSample> samples;
    sim::SimTime finalClock = 0.0;
    std::int64_t overheadMs = 0;
};

} // namespace csx::report
