#pragma once

#include <any>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "csx/cloud/broker.hpp"
#include "csx/cloud/datacenter.hpp"
#include "csx/cloud/types.hpp"
#include "csx/errors.hpp"
#include "csx/schema/model.hpp"
#include "csx/sim/kernel.hpp"
#include "csx/translation/extensions.hpp"

namespace csx::translation {

class ElementHandler;
class HandlerRegistry;

// Shared read-only state for one translation run, plus the sinks the
// handlers fill while building the scenario.
struct TranslationContext {
    sim::Simulation& kernel;
    const schema::SchemaDocument& schemaDoc;
    const ExtensionsCatalog& catalog;
    const HandlerRegistry& registry;

    std::vector<std::shared_ptr<cloud::Datacenter>> datacenters;
    std::vector<std::shared_ptr<cloud::Broker>> brokers;
    std::vector<std::string> path; // component-tree location, for errors

    // Resolves the child's handler through the registry (never by direct
    // construction), runs it, and returns what it produced.
    std::any delegate(const schema::ComponentNode& child,
                      const std::string& segment);
};

// Converts one component type from the script into simulation entities or
// values. handle() is only valid after init().
class ElementHandler {
public:
    virtual ~ElementHandler() = default;
    virtual bool can_handle(const std::string& schemaName) const = 0;
    virtual void init(schema::ComponentNode node, TranslationContext& ctx) = 0;
    virtual std::any handle() = 0;
};

// Ordered (schemaName -> catalog class) bindings; the first matching entry
// wins, so entries registered before the built-ins override them.
class HandlerRegistry {
public:
    void register_handler(std::string schemaName, std::string className) {
        entries_.push_back(Entry{std::move(schemaName), std::move(className)});
    }

    std::vector<std::string> known_schemas() const {
        std::vector<std::string> out;
        for (const Entry& e : entries_) out.push_back(e.schemaName);
        return out;
    }

    std::shared_ptr<ElementHandler> resolve(const std::string& schemaName,
                                            const ExtensionsCatalog& catalog) const {
        for (const Entry& entry : entries_) {
            if (entry.schemaName != schemaName) continue;
            auto handler = catalog.materialize_as<ElementHandler>(
                ExtensionRef{entry.className, {}});
            if (!handler->can_handle(schemaName)) {
                throw ExtensionError(entry.className,
                                     "handler '" + entry.className +
                                         "' refuses schema '" + schemaName + "'");
            }
            return handler;
        }
        std::string known;
        for (const Entry& e : entries_) {
            if (!known.empty()) known += ", ";
            known += e.schemaName;
        }
        throw ExtensionError(schemaName, "no element handler registered for schema '" +
                                             schemaName + "' (known: " + known + ")");
    }

private:
    struct Entry {
        std::string schemaName;
        std::string className;
    };
    std::vector<Entry> entries_;
};

namespace detail {

inline std::string join_path(const std::vector<std::string>& parts) {
    std::string out;
    for (const std::string& part : parts) {
        if (!out.empty()) out += '/';
        out += part;
    }
    return out;
}

// Re-throws the in-flight exception with the component path prepended,
// keeping its dynamic type so exit-code mapping stays intact. Script errors
// already carry document paths in their issues and pass through unchanged.
[[noreturn]] inline void rethrow_at(const std::string& where) {
    try {
        throw;
    } catch (const schema::ScriptError& e) {
        if (!e.issues().empty()) throw; // issues carry document paths already
        throw schema::ScriptError("at " + where + ": " + e.brief());
    } catch (const ExtensionError& e) {
        throw ExtensionError(e.class_name(),
                             "at " + where + ": " + e.what());
    } catch (const SchemaError& e) {
        throw SchemaError("at " + where + ": " + e.what());
    } catch (const SimulationError& e) {
        throw SimulationError("at " + where + ": " + e.what());
    } catch (const ConfigError& e) {
        throw ConfigError("at " + where + ": " + e.what());
    } catch (const Error& e) {
        throw Error("at " + where + ": " + std::string(e.what()));
    }
}

} // namespace detail

inline std::any TranslationContext::delegate(const schema::ComponentNode& child,
                                             const std::string& segment) {
    // On failure the segment stays pushed; the scenario manager reads the
    // stack to report where in the component tree the build stopped.
    path.push_back(segment);
    auto handler = registry.resolve(child.schemaName, catalog);
    handler->init(child, *this);
    std::any produced = handler->handle();
    path.pop_back();
    return produced;
}

// Reads an Extension block ({className, extensionProperties?}).
inline ExtensionRef to_extension_ref(const schema::ComponentNode& node) {
    ExtensionRef ref;
    ref.className = node.at("className").as_string();
    if (ref.className.empty()) {
        throw schema::ScriptError("extension className must not be empty");
    }
    if (const schema::Value* props = node.find("extensionProperties")) {
        for (const auto& [key, value] : props->node().fields) {
            ref.extensionProperties[key] = value.as_string();
        }
    }
    return ref;
}

// ---------------------------------------------------------------------------
// Default element handlers, one per canonical schema element.
// ---------------------------------------------------------------------------

class HandlerBase : public ElementHandler {
public:
    void init(schema::ComponentNode node, TranslationContext& ctx) override {
        node_ = std::move(node);
        ctx_ = &ctx;
    }

protected:
    TranslationContext& ctx() {
        if (!ctx_) throw SimulationError("element handler used before init()");
        return *ctx_;
    }

    const schema::ComponentNode& node() const { return node_; }

    static double number_or(const schema::ComponentNode& n, const std::string& key,
                            double fallback) {
        const schema::Value* v = n.find(key);
        return v ? v->as_number() : fallback;
    }

    static std::int64_t int_or(const schema::ComponentNode& n,
                               const std::string& key, std::int64_t fallback) {
        const schema::Value* v = n.find(key);
        return v ? v->as_int() : fallback;
    }

    static std::string string_or(const schema::ComponentNode& n,
                                 const std::string& key, std::string fallback) {
        const schema::Value* v = n.find(key);
        return v ? v->as_string() : std::move(fallback);
    }

private:
    schema::ComponentNode node_;
    TranslationContext* ctx_ = nullptr;
};

// Root element: a network of zones.
class GlobalZoneHandler final : public HandlerBase {
public:
    bool can_handle(const std::string& schemaName) const override {
        return schemaName == "GlobalDatacenterNetwork";
    }

    std::any handle() override {
        std::size_t index = 0;
        for (const schema::Value& zone : node().at("zones").list()) {
            ctx().delegate(zone.node(), "zones[" + std::to_string(index) + "]");
            ++index;
        }
        return {};
    }
};

// One zone: a datacenter, its broker, and an optional workload.
class RegionalZoneHandler final : public HandlerBase {
public:
    bool can_handle(const std::string& schemaName) const override {
        return schemaName == "Zone";
    }

    std::any handle() override {
        auto dc = std::any_cast<std::shared_ptr<cloud::Datacenter>>(
            ctx().delegate(node().at("datacenter").node(), "datacenter"));
        auto broker = std::any_cast<std::shared_ptr<cloud::Broker>>(
            ctx().delegate(node().at("broker").node(), "broker"));

        cloud::Workload workload;
        if (const schema::Value* w = node().find("workload")) {
            workload = std::any_cast<cloud::Workload>(
                ctx().delegate(w->node(), "workload"));
        }

        try {
            broker->configure(dc->entity_id(), dc->id(), std::move(workload.vms),
                              std::move(workload.cloudlets));
        } catch (const Error& e) {
            // Workload inconsistencies are script problems.
            throw schema::ScriptError(e.what());
        }
        ctx().kernel.schedule(broker->entity_id(), broker->entity_id(), 0.0,
                              cloud::msg::BrokerStart);
        return {};
    }
};

class DatacenterHandler final : public HandlerBase {
public:
    bool can_handle(const std::string& schemaName) const override {
        return schemaName == "Datacenter";
    }

    std::any handle() override {
        const schema::ComponentNode& ch = node().at("characteristics").node();
        cloud::DatacenterCharacteristics characteristics;
        characteristics.arch = string_or(ch, "arch", "");
        characteristics.os = string_or(ch, "os", "");
        characteristics.vmm = string_or(ch, "vmm", "");
        characteristics.timezone = number_or(ch, "timezone", 0.0);
        characteristics.costPerSec = number_or(ch, "costPerSec", 0.0);
        characteristics.costPerMem = number_or(ch, "costPerMem", 0.0);
        characteristics.costPerStorage = number_or(ch, "costPerStorage", 0.0);
        characteristics.costPerBw = number_or(ch, "costPerBw", 0.0);

        std::vector<cloud::Host> hosts;
        std::set<int> hostIds;
        std::size_t index = 0;
        for (const schema::Value& item : node().at("hosts").list()) {
            auto produced = std::any_cast<std::vector<cloud::Host>>(ctx().delegate(
                item.node(), "hosts[" + std::to_string(index) + "]"));
            for (cloud::Host& host : produced) {
                if (!hostIds.insert(host.id()).second) {
                    throw schema::ScriptError("duplicate host id " +
                                              std::to_string(host.id()));
                }
                hosts.push_back(std::move(host));
            }
            ++index;
        }

        auto policy = ctx().catalog.materialize_as<cloud::VmAllocationPolicy>(
            to_extension_ref(node().at("vmAllocationPolicy").node()));

        const double interval = number_or(node(), "schedulingInterval", 0.0);
        if (interval < 0.0) {
            throw schema::ScriptError("schedulingInterval must be >= 0");
        }
        const std::string storage = string_or(node(), "storage", "");

        const int dcId = static_cast<int>(ctx().datacenters.size());
        std::vector<std::any> args{dcId,
                                   characteristics,
                                   hosts,
                                   policy,
                                   interval,
                                   storage};
        auto dc = ctx().catalog.materialize_as<cloud::Datacenter>(
            to_extension_ref(node().at("variant").node()), std::move(args));

        dc->set_entity_id(ctx().kernel.register_entity(dc));
        ctx().datacenters.push_back(dc);
        return dc;
    }
};

// Expands one host block into `copies` hosts with consecutive ids.
class HostHandler final : public HandlerBase {
public:
    bool can_handle(const std::string& schemaName) const override {
        return schemaName == "Host";
    }

    std::any handle() override {
        const auto baseId = node().at("id").as_int();
        const auto peCount = node().at("pes").as_int();
        const double mips = node().at("mips").as_number();
        const auto ramMb = node().at("ramMb").as_int();
        const auto bwMbps = node().at("bwMbps").as_int();
        const auto storageMb = node().at("storageMb").as_int();
        const auto copies = int_or(node(), "copies", 1);

        if (peCount < 1) throw schema::ScriptError("host pes must be >= 1");
        if (!(mips > 0.0)) throw schema::ScriptError("host mips must be > 0");
        if (ramMb < 0 || bwMbps < 0 || storageMb < 0) {
            throw schema::ScriptError("host ramMb/bwMbps/storageMb must be >= 0");
        }
        if (copies < 1) throw schema::ScriptError("host copies must be >= 1");

        std::vector<cloud::Host> hosts;
        hosts.reserve(static_cast<std::size_t>(copies));
        for (std::int64_t k = 0; k < copies; ++k) {
            hosts.push_back(cloud::Host(static_cast<int>(baseId + k),
                                        static_cast<int>(peCount), mips, ramMb,
                                        bwMbps, storageMb));
        }
        return hosts;
    }
};

class BrokerHandler final : public HandlerBase {
public:
    bool can_handle(const std::string& schemaName) const override {
        return schemaName == "Broker";
    }

    std::any handle() override {
        auto broker = std::make_shared<cloud::Broker>(node().at("name").as_string());
        broker->set_entity_id(ctx().kernel.register_entity(broker));
        ctx().brokers.push_back(broker);
        return broker;
    }
};

// Parses the leaf vm/cloudlet specs; these have no handlers of their own.
class WorkloadHandler final : public HandlerBase {
public:
    bool can_handle(const std::string& schemaName) const override {
        return schemaName == "Workload";
    }

    std::any handle() override {
        cloud::Workload workload;
        std::set<int> vmIds;
        std::set<int> cloudletIds;

        if (const schema::Value* vms = node().find("vms")) {
            for (const schema::Value& item : vms->list()) {
                const schema::ComponentNode& spec = item.node();
                cloud::Vm vm;
                vm.id = static_cast<int>(spec.at("id").as_int());
                vm.requestedMips = spec.at("requestedMips").as_number();
                vm.numPes = static_cast<int>(spec.at("numPes").as_int());
                vm.ramMb = int_or(spec, "ramMb", 0);
                vm.bwMbps = int_or(spec, "bwMbps", 0);
                vm.sizeMb = int_or(spec, "sizeMb", 0);
                if (!(vm.requestedMips > 0.0)) {
                    throw schema::ScriptError("vm requestedMips must be > 0");
                }
                if (vm.numPes < 1) throw schema::ScriptError("vm numPes must be >= 1");
                if (vm.ramMb < 0 || vm.bwMbps < 0 || vm.sizeMb < 0) {
                    throw schema::ScriptError("vm ramMb/bwMbps/sizeMb must be >= 0");
                }
                if (!vmIds.insert(vm.id).second) {
                    throw schema::ScriptError("duplicate vm id " +
                                              std::to_string(vm.id));
                }
                workload.vms.push_back(vm);
            }
        }

        if (const schema::Value* cloudlets = node().find("cloudlets")) {
            for (const schema::Value& item : cloudlets->list()) {
                const schema::ComponentNode& spec = item.node();
                cloud::Cloudlet cl;
                cl.id = static_cast<int>(spec.at("id").as_int());
                cl.lengthMi = spec.at("lengthMi").as_number();
                cl.remainingMi = cl.lengthMi;
                cl.numPes = static_cast<int>(spec.at("numPes").as_int());
                cl.assignedVm = static_cast<int>(spec.at("vmId").as_int());
                if (!(cl.lengthMi > 0.0)) {
                    throw schema::ScriptError("cloudlet lengthMi must be > 0");
                }
                if (cl.numPes < 1) {
                    throw schema::ScriptError("cloudlet numPes must be >= 1");
                }
                if (!cloudletIds.insert(cl.id).second) {
                    throw schema::ScriptError("duplicate cloudlet id " +
                                              std::to_string(cl.id));
                }
                workload.cloudlets.push_back(cl);
            }
        }
        return workload;
    }
};

// ---------------------------------------------------------------------------
// Built-in registrations.
// ---------------------------------------------------------------------------

inline constexpr const char* kDefaultDatacenterClass =
    "org.cloudbus.cloudsim.Datacenter";
inline constexpr const char* kDefaultAllocationPolicyClass =
    "org.cloudbus.cloudsim.VmAllocationPolicySimple";

// Built-in entities and policies, under the class names scripts use.
inline void register_builtin_extensions(ExtensionsCatalog& catalog) {
    catalog.register_factory(kDefaultAllocationPolicyClass, [](const FactoryArgs&) {
        return std::any(std::shared_ptr<cloud::VmAllocationPolicy>(
            std::make_shared<cloud::WorstFitPolicy>()));
    });
    catalog.register_factory(kDefaultDatacenterClass, [](const FactoryArgs& args) {
        auto dc = std::make_shared<cloud::Datacenter>(
            args.get<int>(0), args.get<cloud::DatacenterCharacteristics>(1),
            args.get<std::vector<cloud::Host>>(2),
            args.get<std::shared_ptr<cloud::VmAllocationPolicy>>(3),
            args.get<double>(4), args.get<std::string>(5));
        return std::any(std::shared_ptr<cloud::Datacenter>(std::move(dc)));
    });

    // The default handlers route through the catalog like any other
    // extension, so the framework itself can be extended by name.
    catalog.register_factory("csx.handlers.GlobalZone", [](const FactoryArgs&) {
        return std::any(std::shared_ptr<ElementHandler>(
            std::make_shared<GlobalZoneHandler>()));
    });
    catalog.register_factory("csx.handlers.RegionalZone", [](const FactoryArgs&) {
        return std::any(std::shared_ptr<ElementHandler>(
            std::make_shared<RegionalZoneHandler>()));
    });
    catalog.register_factory("csx.handlers.Datacenter", [](const FactoryArgs&) {
        return std::any(std::shared_ptr<ElementHandler>(
            std::make_shared<DatacenterHandler>()));
    });
    catalog.register_factory("csx.handlers.Host", [](const FactoryArgs&) {
        return std::any(std::shared_ptr<ElementHandler>(
            std::make_shared<HostHandler>()));
    });
    catalog.register_factory("csx.handlers.Broker", [](const FactoryArgs&) {
        return std::any(std::shared_ptr<ElementHandler>(
            std::make_shared<BrokerHandler>()));
    });
    catalog.register_factory("csx.handlers.Workload", [](const FactoryArgs&) {
        return std::any(std::shared_ptr<ElementHandler>(
            std::make_shared<WorkloadHandler>()));
    });
}

inline void register_builtin_handlers(HandlerRegistry& registry) {
    registry.register_handler("GlobalDatacenterNetwork", "csx.handlers.GlobalZone");
    registry.register_handler("Zone", "csx.handlers.RegionalZone");
    registry.register_handler("Datacenter", "csx.handlers.Datacenter");
    registry.register_handler("Host", "csx.handlers.Host");
    registry.register_handler("Broker", "csx.handlers.Broker");
    registry.register_handler("Workload", "csx.handlers.Workload");
}

} // namespace csx::translation
