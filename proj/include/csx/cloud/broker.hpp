#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "csx/cloud/messages.hpp"
#include "csx/cloud/types.hpp"
#include "csx/sim/kernel.hpp"

namespace csx::cloud {

// Completed-cloudlet record kept by the broker and exported into the report.
struct CloudletRecord {
    int cloudletId = 0;
    CloudletStatus status = CloudletStatus::Queued;
    int datacenterId = -1;
    int vmId = -1;
    std::optional<sim::SimTime> startTime;
    std::optional<sim::SimTime> finishTime;

    std::optional<sim::SimTime> exec_time() const {
        if (startTime && finishTime) return *finishTime - *startTime;
        return std::nullopt;
    }
};

// Where a VM ended up (or that it could not be placed).
struct VmPlacement {
    int vmId = 0;
    int datacenterId = -1;
    int hostId = -1;
    bool created = false;
};

// Submits VM-create requests at t=0, dispatches cloudlets to their VMs once
// acknowledged, and collects completions. A cloudlet whose VM cannot be
// placed is marked failed.
class Broker : public sim::Entity {
public:
    explicit Broker(std::string name) : name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }
    void set_entity_id(sim::EntityId id) noexcept { self_ = id; }
    sim::EntityId entity_id() const noexcept { return self_; }

    // Wires the broker to its zone's datacenter and validates the workload:
    // every cloudlet must reference a submitted vm id.
    void configure(sim::EntityId datacenterEntity, int datacenterId,
                   std::vector<Vm> vms, std::vector<Cloudlet> cloudlets) {
        datacenter_entity_ = datacenterEntity;
        datacenter_id_ = datacenterId;
        vms_ = std::move(vms);
        cloudlets_ = std::move(cloudlets);
        for (Cloudlet& c : cloudlets_) {
            const int vmId = c.assignedVm.value_or(-1);
            const bool known = std::any_of(vms_.begin(), vms_.end(),
                                           [&](const Vm& v) { return v.id == vmId; });
            if (!known) {
                throw Error("broker '" + name_ + "': cloudlet " + std::to_string(c.id) +
                            " references unknown vm " + std::to_string(vmId));
            }
            records_[c.id] = CloudletRecord{c.id, CloudletStatus::Queued,
                                            datacenter_id_, vmId, {}, {}};
        }
    }

    void process(const sim::Event& event, sim::Simulation& sim) override {
        switch (event.tag) {
            case msg::BrokerStart:
                for (const Vm& vm : vms_) {
                    sim.schedule(self_, datacenter_entity_, 0.0, msg::VmCreate,
                                 msg::VmCreateRequest{vm, self_});
                }
                break;
            case msg::VmCreateAck:
                handle_ack(std::any_cast<const msg::VmCreateAckBody&>(event.payload), sim);
                break;
            case msg::CloudletDone:
                handle_done(std::any_cast<const msg::CloudletCompletion&>(event.payload));
                break;
            default:
                throw SimulationError("broker '" + name_ + "': unexpected event tag " +
                                      std::to_string(event.tag));
        }
    }

    // Records for every submitted cloudlet, ordered by cloudlet id.
    std::vector<CloudletRecord> results() const {
        std::vector<CloudletRecord> rows;
        rows.reserve(records_.size());
        for (const auto& [id, record] : records_) rows.push_back(record);
        return rows;
    }

    // One entry per submitted VM, ordered by vm id.
    std::vector<VmPlacement> placements() const {
        std::vector<VmPlacement> rows;
        rows.reserve(placements_.size());
        for (const auto& [id, p] : placements_) rows.push_back(p);
        return rows;
    }

private:
    void handle_ack(const msg::VmCreateAckBody& ack, sim::Simulation& sim) {
        placements_[ack.vmId] =
            VmPlacement{ack.vmId, datacenter_id_, ack.hostId, ack.success};
        for (Cloudlet& c : cloudlets_) {
            if (c.assignedVm.value_or(-1) != ack.vmId ||
                c.status != CloudletStatus::Queued) {
                continue;
            }
            if (ack.success) {
                c.status = CloudletStatus::Running;
                sim.schedule(self_, datacenter_entity_, 0.0, msg::CloudletSubmit,
                             msg::CloudletSubmission{c, self_});
            } else {
                c.status = CloudletStatus::Failed;
                records_[c.id].status = CloudletStatus::Failed;
            }
        }
    }

    void handle_done(const msg::CloudletCompletion& completion) {
        CloudletRecord& record = records_[completion.cloudletId];
        record.status = CloudletStatus::Success;
        record.vmId = completion.vmId;
        record.startTime = completion.startTime;
        record.finishTime = completion.finishTime;
        for (Cloudlet& c : cloudlets_) {
            if (c.id == completion.cloudletId) c.status = CloudletStatus::Success;
        }
    }

    std::string name_;
    sim::EntityId self_ = -1;
    sim::EntityId datacenter_entity_ = -1;
    int datacenter_id_ = -1;
    std::vector<Vm> vms_;
    std::vector<Cloudlet> cloudlets_;
    std::map<int, CloudletRecord> records_;
    std::map<int, VmPlacement> placements_;
};

} // namespace csx::cloud
