#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "csx/errors.hpp"
#include "csx/sim/kernel.hpp"

namespace csx::cloud {

// Units are fixed across the model: million instructions (MI) for work,
// MIPS for rates, seconds for time, MB for memory/storage, Mbps for
// bandwidth.

// One simulated core of a host.
struct Pe {
    int id = 0;
    double mips = 0.0; // > 0
};

struct Vm {
    int id = 0;
    double requestedMips = 0.0; // per PE, > 0
    int numPes = 1;             // >= 1
    std::int64_t ramMb = 0;
    std::int64_t bwMbps = 0;
    std::int64_t sizeMb = 0;
    std::optional<int> boundHost; // set iff allocation succeeded

    double total_mips() const noexcept { return requestedMips * numPes; }
};

// A physical machine. Capacity is reserved whole-PE / whole-MB per VM; a VM
// appears at most once in the reservation map.
class Host {
public:
    Host() = default;
    Host(int id, int peCount, double mipsPerPe, std::int64_t ramMb,
         std::int64_t bwMbps, std::int64_t storageMb)
        : id_(id), ramMb_(ramMb), bwMbps_(bwMbps), storageMb_(storageMb) {
        pes_.reserve(static_cast<std::size_t>(peCount));
        for (int i = 0; i < peCount; ++i) {
            pes_.push_back(Pe{i, mipsPerPe});
        }
    }

    int id() const noexcept { return id_; }
    const std::vector<Pe>& pes() const noexcept { return pes_; }
    std::int64_t ram_mb() const noexcept { return ramMb_; }
    std::int64_t bw_mbps() const noexcept { return bwMbps_; }
    std::int64_t storage_mb() const noexcept { return storageMb_; }

    int free_pes() const noexcept {
        int reserved = 0;
        for (const auto& [vmId, r] : allocated_) reserved += r.numPes;
        return static_cast<int>(pes_.size()) - reserved;
    }
    std::int64_t free_ram_mb() const noexcept {
        std::int64_t used = 0;
        for (const auto& [vmId, r] : allocated_) used += r.ramMb;
        return ramMb_ - used;
    }
    std::int64_t free_bw_mbps() const noexcept {
        std::int64_t used = 0;
        for (const auto& [vmId, r] : allocated_) used += r.bwMbps;
        return bwMbps_ - used;
    }
    std::int64_t free_storage_mb() const noexcept {
        std::int64_t used = 0;
        for (const auto& [vmId, r] : allocated_) used += r.sizeMb;
        return storageMb_ - used;
    }

    bool can_fit(const Vm& vm) const noexcept {
        return free_pes() >= vm.numPes && free_ram_mb() >= vm.ramMb &&
               free_bw_mbps() >= vm.bwMbps && free_storage_mb() >= vm.sizeMb;
    }

    bool has_vm(int vmId) const noexcept { return allocated_.count(vmId) != 0; }

    void reserve(const Vm& vm) {
        if (has_vm(vm.id)) {
            throw SimulationError("host " + std::to_string(id_) +
                                  ": vm " + std::to_string(vm.id) + " already allocated");
        }
        allocated_[vm.id] = Reservation{vm.numPes, vm.requestedMips, vm.ramMb,
                                        vm.bwMbps, vm.sizeMb};
    }

    void release(int vmId) { allocated_.erase(vmId); }

private:
    struct Reservation {
        int numPes = 0;
        double mipsPerPe = 0.0;
        std::int64_t ramMb = 0;
        std::int64_t bwMbps = 0;
        std::int64_t sizeMb = 0;
    };

    int id_ = 0;
    std::vector<Pe> pes_;
    std::int64_t ramMb_ = 0;
    std::int64_t bwMbps_ = 0;
    std::int64_t storageMb_ = 0;
    std::map<int, Reservation> allocated_;
};

enum class CloudletStatus { Queued, Running, Success, Failed };

inline const char* to_string(CloudletStatus s) noexcept {
    switch (s) {
        case CloudletStatus::Queued: return "QUEUED";
        case CloudletStatus::Running: return "RUNNING";
        case CloudletStatus::Success: return "SUCCESS";
        case CloudletStatus::Failed: return "FAILED";
    }
    return "UNKNOWN";
}

// A unit of work, executed on one VM.
struct Cloudlet {
    int id = 0;
    double lengthMi = 0.0; // > 0
    int numPes = 1;
    double remainingMi = 0.0;
    CloudletStatus status = CloudletStatus::Queued;
    std::optional<sim::SimTime> startTime;
    std::optional<sim::SimTime> finishTime;
    std::optional<int> assignedVm;
};

struct DatacenterCharacteristics {
    std::string arch;
    std::string os;
    std::string vmm;
    double timezone = 0.0;
    double costPerSec = 0.0;
    double costPerMem = 0.0;
    double costPerStorage = 0.0;
    double costPerBw = 0.0;
};

struct Workload {
    std::vector<Vm> vms;
    std::vector<Cloudlet> cloudlets;
};

} // namespace csx::cloud
