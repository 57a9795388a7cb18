#pragma once

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "csx/cloud/allocation.hpp"
#include "csx/cloud/messages.hpp"
#include "csx/cloud/scheduler.hpp"
#include "csx/cloud/types.hpp"
#include "csx/sim/kernel.hpp"

namespace csx::cloud {

// One monitoring observation, produced by datacenter variants that sample
// their VMs (see the sample extensions).
struct MonitorSample {
    sim::SimTime time = 0.0;
    int vmId = 0;
    int runningCloudlets = 0;
};

// Simulation entity owning hosts, VM placements, and per-VM cloudlet
// schedulers. Processing updates are driven by completion estimates, plus
// periodic self-events every schedulingInterval when it is > 0.
//
// update_cloudlet_processing() is the variant hook: subclasses may override
// it to run extra logic on every processing update, as long as they invoke
// the base version.
class Datacenter : public sim::Entity {
public:
    using SchedulerFactory = std::function<std::unique_ptr<CloudletScheduler>()>;

    Datacenter(int id, DatacenterCharacteristics characteristics,
               std::vector<Host> hosts,
               std::shared_ptr<VmAllocationPolicy> vmAllocationPolicy,
               double schedulingInterval, std::string storage,
               SchedulerFactory schedulerFactory = default_scheduler_factory())
        : id_(id),
          characteristics_(std::move(characteristics)),
          hosts_(std::move(hosts)),
          policy_(std::move(vmAllocationPolicy)),
          scheduling_interval_(schedulingInterval),
          storage_(std::move(storage)),
          scheduler_factory_(std::move(schedulerFactory)) {
        if (!policy_) {
            throw SimulationError("datacenter " + std::to_string(id_) +
                                  ": vm allocation policy is required");
        }
        if (scheduling_interval_ < 0.0) {
            throw SimulationError("datacenter " + std::to_string(id_) +
                                  ": schedulingInterval must be >= 0");
        }
    }

    int id() const noexcept { return id_; }
    const DatacenterCharacteristics& characteristics() const noexcept {
        return characteristics_;
    }
    const std::vector<Host>& hosts() const noexcept { return hosts_; }
    const std::string& storage() const noexcept { return storage_; }

    void set_entity_id(sim::EntityId id) noexcept { self_ = id; }
    sim::EntityId entity_id() const noexcept { return self_; }

    // Monitoring output exported into the final report; the base datacenter
    // records nothing.
    virtual std::vector<MonitorSample> monitor_samples() const { return {}; }

    void process(const sim::Event& event, sim::Simulation& sim) override {
        switch (event.tag) {
            case msg::VmCreate:
                handle_vm_create(std::any_cast<const msg::VmCreateRequest&>(event.payload),
                                 sim);
                break;
            case msg::CloudletSubmit:
                handle_cloudlet_submit(
                    std::any_cast<const msg::CloudletSubmission&>(event.payload),
                    event.time, sim);
                break;
            case msg::UpdateProcessing: {
                auto it = pending_updates_.find(event.time);
                if (it != pending_updates_.end()) pending_updates_.erase(it);
                update_cloudlet_processing(event.time, sim);
                break;
            }
            default:
                throw SimulationError("datacenter " + std::to_string(id_) +
                                      ": unexpected event tag " +
                                      std::to_string(event.tag));
        }
    }

protected:
    double scheduling_interval() const noexcept { return scheduling_interval_; }

    struct VmLoad {
        int vmId = 0;
        int runningCloudlets = 0;
    };

    // Allocated VMs with their current running-cloudlet counts, ordered by
    // vm id.
    std::vector<VmLoad> vm_loads() const {
        std::vector<VmLoad> loads;
        loads.reserve(vms_.size());
        for (const auto& [vmId, rt] : vms_) {
            loads.push_back(VmLoad{vmId, static_cast<int>(rt.scheduler->running().size())});
        }
        return loads;
    }

    // Progresses every VM's scheduler to `now`, emits completions, and
    // schedules the next self-update (earliest completion estimate and/or
    // the next interval tick). When nothing is running, no further
    // self-events are produced.
    virtual void update_cloudlet_processing(sim::SimTime now, sim::Simulation& sim) {
        progress_all(now, sim);
        schedule_next_update(now, sim);
    }

private:
    struct VmRuntime {
        Vm vm;
        int hostId = -1;
        std::unique_ptr<CloudletScheduler> scheduler;
        std::map<int, sim::EntityId> replyTo; // cloudletId -> broker
        std::optional<sim::SimTime> nextCompletion;
    };

    static SchedulerFactory default_scheduler_factory() {
        return [] { return std::make_unique<TimeSharedScheduler>(); };
    }

    void handle_vm_create(const msg::VmCreateRequest& request,
                          sim::Simulation& sim) {
        const Vm& vm = request.vm;
        if (vms_.count(vm.id) != 0) {
            throw SimulationError("datacenter " + std::to_string(id_) +
                                  ": duplicate vm id " + std::to_string(vm.id));
        }
        msg::VmCreateAckBody ack{vm.id, false, -1};
        if (auto hostId = policy_->allocate(vm, hosts_)) {
            Host& host = host_by_id(*hostId);
            if (!host.can_fit(vm)) {
                throw SimulationError(
                    "datacenter " + std::to_string(id_) + ": allocation policy chose host " +
                    std::to_string(*hostId) + " which cannot fit vm " +
                    std::to_string(vm.id));
            }
            host.reserve(vm);
            VmRuntime rt;
            rt.vm = vm;
            rt.vm.boundHost = *hostId;
            rt.hostId = *hostId;
            rt.scheduler = scheduler_factory_();
            vms_.emplace(vm.id, std::move(rt));
            ack.success = true;
            ack.hostId = *hostId;
        }
        sim.schedule(self_, request.replyTo, 0.0, msg::VmCreateAck, ack);
    }

    void handle_cloudlet_submit(const msg::CloudletSubmission& submission,
                                sim::SimTime now, sim::Simulation& sim) {
        auto it = vms_.find(submission.cloudlet.assignedVm.value_or(-1));
        if (it == vms_.end()) {
            throw SimulationError("datacenter " + std::to_string(id_) +
                                  ": cloudlet " + std::to_string(submission.cloudlet.id) +
                                  " submitted for a vm that is not allocated here");
        }
        // Bring every VM up to date before the new cloudlet starts sharing.
        update_cloudlet_processing(now, sim);
        VmRuntime& rt = it->second;
        rt.replyTo[submission.cloudlet.id] = submission.replyTo;
        rt.scheduler->submit(submission.cloudlet, now);
        rt.nextCompletion.reset();
        refresh_estimate(rt, now);
        schedule_next_update(now, sim);
    }

    void refresh_estimate(VmRuntime& rt, sim::SimTime now) {
        auto result = rt.scheduler->update(now, rt.vm.total_mips());
        rt.nextCompletion = result.nextCompletion;
        // A zero-elapsed update progresses nothing; positive-length cloudlets
        // cannot complete here.
        if (!result.finished.empty()) {
            throw SimulationError("datacenter " + std::to_string(id_) +
                                  ": cloudlet completed during submit update");
        }
    }

    void progress_all(sim::SimTime now, sim::Simulation& sim) {
        for (auto& [vmId, rt] : vms_) {
            if (rt.scheduler->running().empty()) {
                rt.nextCompletion.reset();
                continue;
            }
            auto result = rt.scheduler->update(now, rt.vm.total_mips());
            rt.nextCompletion = result.nextCompletion;
            for (Cloudlet& done : result.finished) {
                msg::CloudletCompletion completion{done.id, vmId,
                                                   done.startTime.value_or(0.0),
                                                   done.finishTime.value_or(now)};
                auto reply = rt.replyTo.find(done.id);
                if (reply != rt.replyTo.end()) {
                    sim.schedule(self_, reply->second, 0.0, msg::CloudletDone, completion);
                    rt.replyTo.erase(reply);
                }
            }
        }
    }

    void schedule_next_update(sim::SimTime now, sim::Simulation& sim) {
        std::optional<sim::SimTime> desired;
        bool anyRunning = false;
        for (const auto& [vmId, rt] : vms_) {
            if (!rt.scheduler->running().empty()) anyRunning = true;
            if (rt.nextCompletion &&
                (!desired || *rt.nextCompletion < *desired)) {
                desired = rt.nextCompletion;
            }
        }
        if (anyRunning && scheduling_interval_ > 0.0) {
            const sim::SimTime tick = now + scheduling_interval_;
            if (!desired || tick < *desired) desired = tick;
        }
        if (!desired) return;
        // An already-pending update at or before the desired time covers it.
        if (!pending_updates_.empty() && *pending_updates_.begin() <= *desired) {
            return;
        }
        const sim::SimTime delay = *desired - now;
        sim.schedule(self_, self_, delay, msg::UpdateProcessing);
        pending_updates_.insert(now + delay);
    }

    Host& host_by_id(int hostId) {
        for (Host& host : hosts_) {
            if (host.id() == hostId) return host;
        }
        throw SimulationError("datacenter " + std::to_string(id_) +
                              ": allocation policy returned unknown host id " +
                              std::to_string(hostId));
    }

    int id_ = 0;
    DatacenterCharacteristics characteristics_;
    std::vector<Host> hosts_;
    std::shared_ptr<VmAllocationPolicy> policy_;
    double scheduling_interval_ = 0.0;
    std::string storage_;
    SchedulerFactory scheduler_factory_;
    sim::EntityId self_ = -1;
    std::map<int, VmRuntime> vms_;
    std::multiset<sim::SimTime> pending_updates_;
};

} // namespace csx::cloud
