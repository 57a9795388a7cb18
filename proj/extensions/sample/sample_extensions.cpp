// Sample out-of-tree extensions: a round-robin VM allocation policy and a
// datacenter variant that samples its VMs on every processing update. Built
// as a separate artifact against the public extension API only; activated
// from scripts by class name, never by modifying the framework.

#include <csx/extension_api.hpp>

#include <memory>
#include <utility>
#include <vector>

namespace {

using namespace csx;

// Cyclic scan starting at a cursor; the cursor advances past each successful
// allocation and is left untouched when nothing fits.
class RoundRobinAllocationPolicy final : public cloud::VmAllocationPolicy {
public:
    std::optional<int> allocate(const cloud::Vm& vm,
                                const std::vector<cloud::Host>& hosts) override {
        if (hosts.empty()) return std::nullopt;
        const std::size_t n = hosts.size();
        for (std::size_t step = 0; step < n; ++step) {
            const std::size_t index = (cursor_ + step) % n;
            if (hosts[index].can_fit(vm)) {
                cursor_ = (index + 1) % n;
                return hosts[index].id();
            }
        }
        return std::nullopt;
    }

private:
    std::size_t cursor_ = 0;
};

// Datacenter that appends one (time, vmId, runningCloudlets) sample per
// allocated VM whenever a scheduling interval has elapsed. Base processing
// behavior is untouched, so cloudlet timings match the stock datacenter.
class MonitoringDatacenter final : public cloud::Datacenter {
public:
    using Datacenter::Datacenter;

    std::vector<cloud::MonitorSample> monitor_samples() const override {
        return log_;
    }

protected:
    void update_cloudlet_processing(sim::SimTime now, sim::Simulation& sim) override {
        Datacenter::update_cloudlet_processing(now, sim);
        if (have_sampled_ && now < last_sample_ + scheduling_interval()) {
            return;
        }
        for (const VmLoad& load : vm_loads()) {
            log_.push_back(cloud::MonitorSample{now, load.vmId, load.runningCloudlets});
        }
        have_sampled_ = true;
        last_sample_ = now;
    }

private:
    std::vector<cloud::MonitorSample> log_;
    bool have_sampled_ = false;
    sim::SimTime last_sample_ = 0.0;
};

} // namespace

extern "C" void csx_register_extensions(csx::translation::ExtensionsCatalog& catalog) {
    catalog.register_factory(
        "sample.ext.RoundRobinAllocationPolicy",
        [](const translation::FactoryArgs&) {
            return std::any(std::shared_ptr<cloud::VmAllocationPolicy>(
                std::make_shared<RoundRobinAllocationPolicy>()));
        });
    catalog.register_factory(
        "sample.ext.MonitoringDatacenter",
        [](const translation::FactoryArgs& args) {
            auto dc = std::make_shared<MonitoringDatacenter>(
                args.get<int>(0), args.get<cloud::DatacenterCharacteristics>(1),
                args.get<std::vector<cloud::Host>>(2),
                args.get<std::shared_ptr<cloud::VmAllocationPolicy>>(3),
                args.get<double>(4), args.get<std::string>(5));
            return std::any(std::shared_ptr<cloud::Datacenter>(std::move(dc)));
        });
}
