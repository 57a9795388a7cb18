#pragma once

#include <optional>
#include <vector>

#include "csx/cloud/types.hpp"

namespace csx::cloud {

// Extension point: picks a host for a VM. The datacenter itself performs the
// reservation and re-checks feasibility of whatever the policy returns, so a
// policy that picks an overloaded host is rejected at run time.
class VmAllocationPolicy {
public:
    virtual ~VmAllocationPolicy() = default;

    // Host id, or nullopt when no host qualifies.
    virtual std::optional<int> allocate(const Vm& vm,
                                        const std::vector<Host>& hosts) = 0;

    virtual void deallocate(const Vm& vm) { (void)vm; }
};

// Worst fit: the qualifying host with the most unreserved PEs, ties broken
// by lowest host id.
inline std::optional<int> worst_fit_allocate(const Vm& vm,
                                             const std::vector<Host>& hosts) {
    std::optional<int> best;
    int bestFree = -1;
    for (const Host& host : hosts) {
        if (!host.can_fit(vm)) continue;
        const int free = host.free_pes();
        if (free > bestFree || (free == bestFree && best && host.id() < *best)) {
            best = host.id();
            bestFree = free;
        }
    }
    return best;
}

class WorstFitPolicy final : public VmAllocationPolicy {
public:
    std::optional<int> allocate(const Vm& vm,
                                const std::vector<Host>& hosts) override {
        return worst_fit_allocate(vm, hosts);
    }
};

} // namespace csx::cloud
