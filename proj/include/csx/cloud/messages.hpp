#pragma once

#include "csx/cloud/types.hpp"
#include "csx/sim/kernel.hpp"

namespace csx::cloud::msg {

// Event tags exchanged between brokers and datacenters.
enum Tag : int {
    BrokerStart = 1,
    VmCreate = 2,
    VmCreateAck = 3,
    CloudletSubmit = 4,
    CloudletDone = 5,
    UpdateProcessing = 6,
};

struct VmCreateRequest {
    Vm vm;
    sim::EntityId replyTo = -1;
};

struct VmCreateAckBody {
    int vmId = 0;
    bool success = false;
    int hostId = -1;
};

struct CloudletSubmission {
    Cloudlet cloudlet;
    sim::EntityId replyTo = -1;
};

struct CloudletCompletion {
    int cloudletId = 0;
    int vmId = 0;
    sim::SimTime startTime = 0.0;
    sim::SimTime finishTime = 0.0;
};

} // namespace csx::cloud::msg
