#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <memory>
#include <random>
#include <vector>

#include "csx/cloud/allocation.hpp"
#include "csx/cloud/broker.hpp"
#include "csx/cloud/datacenter.hpp"
#include "csx/cloud/scheduler.hpp"
#include "csx/cloud/types.hpp"
#include "csx/sim/kernel.hpp"

using namespace csx;
using cloud::Cloudlet;
using cloud::CloudletStatus;
using cloud::Host;
using cloud::TimeSharedScheduler;
using cloud::Vm;

namespace {

Host host_with_pes(int id, int peCount) {
    return Host(id, peCount, 1000.0, 1 << 20, 1 << 20, 1 << 30);
}

Vm vm_with_pes(int id, int numPes) {
    Vm vm;
    vm.id = id;
    vm.requestedMips = 500.0;
    vm.numPes = numPes;
    vm.ramMb = 1;
    vm.bwMbps = 1;
    vm.sizeMb = 1;
    return vm;
}

Cloudlet cloudlet(int id, double lengthMi, int vmId) {
    Cloudlet c;
    c.id = id;
    c.lengthMi = lengthMi;
    c.remainingMi = lengthMi;
    c.numPes = 1;
    c.assignedVm = vmId;
    return c;
}

// Exhaustive oracle: scan all hosts, keep the feasible one with the most
// free PEs, lowest id on ties.
std::optional<int> brute_force_worst_fit(const Vm& vm,
                                         const std::vector<Host>& hosts) {
    std::optional<int> best;
    int bestFree = -1;
    std::vector<const Host*> byId;
    for (const Host& h : hosts) byId.push_back(&h);
    std::sort(byId.begin(), byId.end(),
              [](const Host* a, const Host* b) { return a->id() < b->id(); });
    for (const Host* h : byId) {
        if (h->free_pes() >= vm.numPes && h->free_ram_mb() >= vm.ramMb &&
            h->free_bw_mbps() >= vm.bwMbps && h->free_storage_mb() >= vm.sizeMb &&
            h->free_pes() > bestFree) {
            best = h->id();
            bestFree = h->free_pes();
        }
    }
    return best;
}

// Minimal one-datacenter, one-broker scenario assembled without the script
// pipeline.
struct Mini {
    sim::Simulation sim;
    std::shared_ptr<cloud::Datacenter> dc;
    std::shared_ptr<cloud::Broker> broker;

    Mini(std::vector<Host> hosts, double interval, std::vector<Vm> vms,
         std::vector<Cloudlet> cloudlets,
         std::shared_ptr<cloud::Datacenter> variant = nullptr) {
        dc = variant ? std::move(variant)
                     : std::make_shared<cloud::Datacenter>(
                           0, cloud::DatacenterCharacteristics{}, std::move(hosts),
                           std::make_shared<cloud::WorstFitPolicy>(), interval, "");
        broker = std::make_shared<cloud::Broker>("test-broker");
        dc->set_entity_id(sim.register_entity(dc));
        broker->set_entity_id(sim.register_entity(broker));
        broker->configure(dc->entity_id(), dc->id(), std::move(vms),
                          std::move(cloudlets));
        sim.schedule(broker->entity_id(), broker->entity_id(), 0.0,
                     cloud::msg::BrokerStart);
    }
};

class CountingDatacenter : public cloud::Datacenter {
public:
    using Datacenter::Datacenter;
    int hookCalls = 0;
    std::vector<double> hookTimes;

protected:
    void update_cloudlet_processing(sim::SimTime now, sim::Simulation& s) override {
        ++hookCalls;
        hookTimes.push_back(now);
        Datacenter::update_cloudlet_processing(now, s);
    }
};

} // namespace

TEST(WorstFit, PicksHostWithMostFreePes) {
    std::vector<Host> hosts{host_with_pes(0, 2), host_with_pes(1, 5),
                            host_with_pes(2, 3)};
    EXPECT_EQ(cloud::worst_fit_allocate(vm_with_pes(0, 1), hosts), 1);
}

TEST(WorstFit, SingleQualifyingHost) {
    std::vector<Host> hosts{host_with_pes(0, 1), host_with_pes(1, 4)};
    EXPECT_EQ(cloud::worst_fit_allocate(vm_with_pes(0, 3), hosts), 1);
}

TEST(WorstFit, NoQualifyingHostReturnsNone) {
    std::vector<Host> hosts{host_with_pes(0, 2), host_with_pes(1, 2)};
    EXPECT_FALSE(cloud::worst_fit_allocate(vm_with_pes(0, 4), hosts).has_value());
}

TEST(WorstFit, TiesGoToLowestHostId) {
    std::vector<Host> hosts{host_with_pes(3, 4), host_with_pes(1, 4),
                            host_with_pes(2, 4)};
    EXPECT_EQ(cloud::worst_fit_allocate(vm_with_pes(0, 1), hosts), 1);
}

TEST(WorstFit, RespectsRamBwStorageDemands) {
    Host small(0, 8, 1000.0, 128, 100, 1000);
    Host big(1, 2, 1000.0, 4096, 10000, 100000);
    Vm vm = vm_with_pes(0, 1);
    vm.ramMb = 512;
    EXPECT_EQ(cloud::worst_fit_allocate(vm, {small, big}), 1);
}

TEST(WorstFit, MatchesBruteForceOracleOnRandomInstances) {
    std::mt19937 rng(31337u);
    std::uniform_int_distribution<int> hostCount(1, 8);
    std::uniform_int_distribution<int> vmCount(1, 8);
    std::uniform_int_distribution<int> pes(1, 8);
    std::uniform_int_distribution<std::int64_t> ram(0, 2048);

    for (int round = 0; round < 300; ++round) {
        std::vector<Host> hosts;
        const int nh = hostCount(rng);
        for (int h = 0; h < nh; ++h) {
            hosts.push_back(Host(h, pes(rng), 1000.0, ram(rng), ram(rng), ram(rng)));
        }
        const int nv = vmCount(rng);
        for (int v = 0; v < nv; ++v) {
            Vm vm = vm_with_pes(v, pes(rng));
            vm.ramMb = ram(rng) / 4;
            vm.bwMbps = ram(rng) / 4;
            vm.sizeMb = ram(rng) / 4;
            const auto expected = brute_force_worst_fit(vm, hosts);
            const auto actual = cloud::worst_fit_allocate(vm, hosts);
            ASSERT_EQ(actual, expected) << "round " << round << " vm " << v;
            if (actual) {
                for (Host& h : hosts) {
                    if (h.id() == *actual) h.reserve(vm);
                }
            }
        }
    }
}

TEST(TimeSharedScheduler, SingleCloudletFinishesAtLengthOverMips) {
    TimeSharedScheduler s;
    s.submit(cloudlet(0, 1000.0, 0), 0.0);
    auto first = s.update(0.0, 1000.0);
    ASSERT_TRUE(first.nextCompletion.has_value());
    EXPECT_DOUBLE_EQ(*first.nextCompletion, 1.0);
    auto second = s.update(*first.nextCompletion, 1000.0);
    ASSERT_EQ(second.finished.size(), 1u);
    EXPECT_DOUBLE_EQ(*second.finished[0].finishTime, 1.0);
    EXPECT_FALSE(second.nextCompletion.has_value());
}

TEST(TimeSharedScheduler, TwoEqualCloudletsShareCapacity) {
    // 2 x 1000 MI on 1000 MIPS: each runs at 500 MIPS, both finish at 2.0.
    TimeSharedScheduler s;
    s.submit(cloudlet(0, 1000.0, 0), 0.0);
    s.submit(cloudlet(1, 1000.0, 0), 0.0);
    auto first = s.update(0.0, 1000.0);
    ASSERT_TRUE(first.nextCompletion.has_value());
    EXPECT_DOUBLE_EQ(*first.nextCompletion, 2.0);
    auto second = s.update(2.0, 1000.0);
    ASSERT_EQ(second.finished.size(), 2u);
    EXPECT_DOUBLE_EQ(*second.finished[0].finishTime, 2.0);
    EXPECT_DOUBLE_EQ(*second.finished[1].finishTime, 2.0);
}

TEST(TimeSharedScheduler, SurvivorSpeedsUpAfterCompletion) {
    // 500 MI and 1000 MI on 1000 MIPS: equal share until t=1.0 completes the
    // short one, then the survivor gets the full rate and ends at 1.5.
    TimeSharedScheduler s;
    s.submit(cloudlet(0, 500.0, 0), 0.0);
    s.submit(cloudlet(1, 1000.0, 0), 0.0);
    auto r = s.update(0.0, 1000.0);
    ASSERT_TRUE(r.nextCompletion.has_value());
    EXPECT_DOUBLE_EQ(*r.nextCompletion, 1.0);
    r = s.update(1.0, 1000.0);
    ASSERT_EQ(r.finished.size(), 1u);
    EXPECT_EQ(r.finished[0].id, 0);
    ASSERT_TRUE(r.nextCompletion.has_value());
    EXPECT_DOUBLE_EQ(*r.nextCompletion, 1.5);
    r = s.update(1.5, 1000.0);
    ASSERT_EQ(r.finished.size(), 1u);
    EXPECT_EQ(r.finished[0].id, 1);
}

TEST(TimeSharedScheduler, EmptyUpdateReturnsNone) {
    TimeSharedScheduler s;
    auto r = s.update(1.0, 1000.0);
    EXPECT_TRUE(r.finished.empty());
    EXPECT_FALSE(r.nextCompletion.has_value());
}

TEST(TimeSharedScheduler, NonPositiveCapacityRejected) {
    TimeSharedScheduler s;
    s.submit(cloudlet(0, 100.0, 0), 0.0);
    EXPECT_THROW(s.update(1.0, 0.0), SimulationError);
    EXPECT_THROW(s.update(1.0, -5.0), SimulationError);
}

TEST(TimeSharedScheduler, WorkConservationBetweenCompletions) {
    // Over any update interval that does not cross a completion, total
    // remaining work drops by exactly capacity * elapsed.
    std::mt19937 rng(4242u);
    std::uniform_real_distribution<double> len(10.0, 5000.0);
    std::uniform_real_distribution<double> frac(0.05, 0.95);

    for (int round = 0; round < 50; ++round) {
        TimeSharedScheduler s;
        const double mips = 100.0 + len(rng);
        const int n = 1 + (round % 5);
        for (int i = 0; i < n; ++i) s.submit(cloudlet(i, len(rng), 0), 0.0);

        double now = 0.0;
        auto r = s.update(now, mips);
        while (r.nextCompletion) {
            double total_before = 0.0;
            for (const Cloudlet& c : s.running()) total_before += c.remainingMi;

            // Step to a point strictly inside the interval, then check.
            const double mid = now + frac(rng) * (*r.nextCompletion - now);
            r = s.update(mid, mips);
            ASSERT_TRUE(r.finished.empty());
            double total_after = 0.0;
            for (const Cloudlet& c : s.running()) total_after += c.remainingMi;
            ASSERT_NEAR(total_before - total_after, mips * (mid - now),
                        1e-9 * std::max(1.0, total_before));

            now = mid;
            ASSERT_TRUE(r.nextCompletion.has_value());
            const double boundary = *r.nextCompletion;
            r = s.update(boundary, mips);
            now = boundary;
        }
    }
}

namespace {

// Drives a scheduler to completion on its own estimates; returns finish time
// per cloudlet id.
std::map<int, double> drive_to_completion(const std::vector<double>& lengths,
                                          double mips) {
    TimeSharedScheduler s;
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        s.submit(cloudlet(static_cast<int>(i), lengths[i], 0), 0.0);
    }
    std::map<int, double> finish;
    auto r = s.update(0.0, mips);
    while (r.nextCompletion) {
        r = s.update(*r.nextCompletion, mips);
        for (const Cloudlet& c : r.finished) finish[c.id] = *c.finishTime;
    }
    return finish;
}

} // namespace

TEST(TimeSharedScheduler, AddingCloudletNeverSpeedsUpOthers) {
    std::mt19937 rng(555u);
    std::uniform_real_distribution<double> len(10.0, 2000.0);
    for (int round = 0; round < 40; ++round) {
        const double mips = 500.0 + len(rng);
        std::vector<double> lengths;
        const int n = 1 + (round % 4);
        for (int i = 0; i < n; ++i) lengths.push_back(len(rng));

        const auto base = drive_to_completion(lengths, mips);
        auto extended = lengths;
        extended.push_back(len(rng));
        const auto withExtra = drive_to_completion(extended, mips);

        for (const auto& [id, t] : base) {
            ASSERT_GE(withExtra.at(id), t - 1e-9 * std::max(1.0, t))
                << "round " << round;
        }
    }
}

TEST(Datacenter, VmThatFitsIsAcknowledgedWithHost) {
    Mini mini({host_with_pes(0, 4)}, 0.0, {vm_with_pes(0, 2)}, {});
    mini.sim.run();
    const auto placements = mini.broker->placements();
    ASSERT_EQ(placements.size(), 1u);
    EXPECT_TRUE(placements[0].created);
    EXPECT_EQ(placements[0].hostId, 0);
}

TEST(Datacenter, VmExceedingEveryHostFailsDependentCloudlets) {
    Mini mini({host_with_pes(0, 2)}, 0.0, {vm_with_pes(0, 4)},
              {cloudlet(0, 1000.0, 0)});
    mini.sim.run();
    const auto placements = mini.broker->placements();
    ASSERT_EQ(placements.size(), 1u);
    EXPECT_FALSE(placements[0].created);
    const auto results = mini.broker->results();
    ASSERT_EQ(results.size(), 1u);
    EXPECT_EQ(results[0].status, CloudletStatus::Failed);
    EXPECT_FALSE(results[0].finishTime.has_value());
}

TEST(Datacenter, SecondVmFailsOnceCapacityIsReserved) {
    // Replay by hand: host 0 has 2 PEs, host 1 has 1. The first 2-PE vm takes
    // host 0; the second 2-PE vm no longer fits anywhere.
    Mini mini({host_with_pes(0, 2), host_with_pes(1, 1)}, 0.0,
              {vm_with_pes(0, 2), vm_with_pes(1, 2)}, {});
    mini.sim.run();
    const auto placements = mini.broker->placements();
    ASSERT_EQ(placements.size(), 2u);
    EXPECT_TRUE(placements[0].created);
    EXPECT_EQ(placements[0].hostId, 0);
    EXPECT_FALSE(placements[1].created);
}

TEST(Datacenter, DuplicateVmIdIsProtocolError) {
    Mini mini({host_with_pes(0, 8)}, 0.0, {vm_with_pes(0, 1), vm_with_pes(0, 1)},
              {});
    EXPECT_THROW(mini.sim.run(), SimulationError);
}

TEST(Datacenter, PolicyReturningInfeasibleHostIsRejected) {
    class BadPolicy : public cloud::VmAllocationPolicy {
    public:
        std::optional<int> allocate(const Vm&, const std::vector<Host>& hosts) override {
            return hosts.front().id(); // never checks capacity
        }
    };
    auto dc = std::make_shared<cloud::Datacenter>(
        0, cloud::DatacenterCharacteristics{},
        std::vector<Host>{host_with_pes(0, 1)}, std::make_shared<BadPolicy>(), 0.0,
        "");
    Mini mini({}, 0.0, {vm_with_pes(0, 4)}, {}, dc);
    EXPECT_THROW(mini.sim.run(), SimulationError);
}

TEST(Datacenter, IntervalZeroIsCompletionDrivenOnly) {
    auto dc = std::make_shared<CountingDatacenter>(
        0, cloud::DatacenterCharacteristics{},
        std::vector<Host>{host_with_pes(0, 4)},
        std::make_shared<cloud::WorstFitPolicy>(), 0.0, "");
    Mini mini({}, 0.0, {vm_with_pes(0, 1)}, {cloudlet(0, 1000.0, 0)}, dc);
    mini.sim.run();
    // Manual trace: one update on submit, one at the completion estimate.
    EXPECT_EQ(dc->hookCalls, 2);
}

TEST(Datacenter, PositiveIntervalAddsPeriodicTicks) {
    // vm capacity 500 MIPS, 500 MI -> 1.0 s runtime; interval 0.1 gives at
    // least ten hook invocations before the work completes.
    auto dc = std::make_shared<CountingDatacenter>(
        0, cloud::DatacenterCharacteristics{},
        std::vector<Host>{host_with_pes(0, 4)},
        std::make_shared<cloud::WorstFitPolicy>(), 0.1, "");
    Mini mini({}, 0.0, {vm_with_pes(0, 1)}, {cloudlet(0, 500.0, 0)}, dc);
    mini.sim.run();
    EXPECT_GE(dc->hookCalls, 10);
    const auto results = mini.broker->results();
    ASSERT_EQ(results.size(), 1u);
    EXPECT_EQ(results[0].status, CloudletStatus::Success);
    EXPECT_NEAR(*results[0].finishTime, 1.0, 1e-9);
}

TEST(Datacenter, NoActiveCloudletsMeansTermination) {
    Mini mini({host_with_pes(0, 4)}, 0.25, {vm_with_pes(0, 1)}, {});
    // With an allocated vm but no work, no periodic self-events may keep the
    // simulation alive.
    EXPECT_DOUBLE_EQ(mini.sim.run(), 0.0);
    EXPECT_EQ(mini.sim.scheduled_count(), mini.sim.dispatched_count());
}

TEST(Broker, SingleCloudletMakespan) {
    std::vector<Vm> vms{vm_with_pes(0, 2)}; // 2 x 500 = 1000 MIPS
    Mini mini({host_with_pes(0, 4)}, 0.0, vms, {cloudlet(0, 1000.0, 0)});
    const double finalClock = mini.sim.run();
    const auto results = mini.broker->results();
    ASSERT_EQ(results.size(), 1u);
    EXPECT_EQ(results[0].status, CloudletStatus::Success);
    EXPECT_DOUBLE_EQ(*results[0].startTime, 0.0);
    EXPECT_DOUBLE_EQ(*results[0].finishTime, 1.0);
    EXPECT_DOUBLE_EQ(finalClock, 1.0);
}

TEST(Broker, NoCloudletsEndsAtTimeZero) {
    Mini mini({host_with_pes(0, 4)}, 0.0, {vm_with_pes(0, 1)}, {});
    EXPECT_DOUBLE_EQ(mini.sim.run(), 0.0);
    EXPECT_TRUE(mini.broker->results().empty());
}

TEST(Broker, CloudletReferencingUnknownVmRejectedBeforeRun) {
    sim::Simulation s;
    auto dc = std::make_shared<cloud::Datacenter>(
        0, cloud::DatacenterCharacteristics{},
        std::vector<Host>{host_with_pes(0, 4)},
        std::make_shared<cloud::WorstFitPolicy>(), 0.0, "");
    auto broker = std::make_shared<cloud::Broker>("b");
    dc->set_entity_id(s.register_entity(dc));
    broker->set_entity_id(s.register_entity(broker));
    EXPECT_THROW(broker->configure(dc->entity_id(), 0, {vm_with_pes(0, 1)},
                                   {cloudlet(0, 100.0, 9)}),
                 Error);
}

TEST(Broker, MakespanLawHoldsForRandomPairs) {
    std::mt19937 rng(2718u);
    std::uniform_real_distribution<double> len(1.0, 50000.0);
    std::uniform_real_distribution<double> mips(1.0, 20000.0);
    for (int i = 0; i < 25; ++i) {
        const double L = len(rng);
        const double M = mips(rng);
        Vm vm;
        vm.id = 0;
        vm.requestedMips = M;
        vm.numPes = 1;
        Mini mini({host_with_pes(0, 8)}, 0.0, {vm}, {cloudlet(0, L, 0)});
        mini.sim.run();
        const auto results = mini.broker->results();
        ASSERT_EQ(results.size(), 1u);
        const double expected = L / M;
        ASSERT_NEAR(*results[0].finishTime, expected, 1e-9 * expected);
    }
}
