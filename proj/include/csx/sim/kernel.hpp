#pragma once

#include <any>
#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "csx/errors.hpp"

namespace csx::sim {

// Simulated time in seconds.
using SimTime = double;

// Index assigned at registration, unique per Simulation instance.
using EntityId = int;

class Simulation;

// Lifecycle misuse: registering after run(), re-entrant run(), etc.
class LifecycleError : public Error {
public:
    using Error::Error;
};

class UnknownEntityError : public Error {
public:
    using Error::Error;
};

struct Event {
    SimTime time = 0.0;
    std::uint64_t seq = 0; // insertion counter, breaks ties at equal time
    EntityId source = -1;
    EntityId target = -1;
    int tag = 0;
    std::any payload;
};

// An event-processing object. All callbacks run on the thread that called
// Simulation::run(); an entity belongs to exactly one Simulation.
class Entity {
public:
    virtual ~Entity() = default;
    virtual void process(const Event& event, Simulation& sim) = 0;
};

// Deterministic single-clock discrete-event engine. Events move through a
// future-event list ordered by (time, seq); the clock only ever advances to
// the next event's timestamp. Distinct instances share no state and may run
// concurrently on different threads.
class Simulation {
public:
    enum class State { Created, Running, Finished };

    // Only valid before run(). Returns a fresh id.
    EntityId register_entity(std::shared_ptr<Entity> entity) {
        if (state_ != State::Created) {
            throw LifecycleError("register_entity: simulation already started");
        }
        if (!entity) {
            throw std::invalid_argument("register_entity: null entity");
        }
        entities_.push_back(std::move(entity));
        return static_cast<EntityId>(entities_.size()) - 1;
    }

    // Inserts an event at clock + delay. Valid before and during run().
    void schedule(EntityId source, EntityId target, SimTime delay, int tag,
                  std::any payload = {}) {
        if (state_ == State::Finished) {
            throw LifecycleError("schedule: simulation already finished");
        }
        if (!(delay >= 0.0)) {
            throw std::invalid_argument("schedule: delay must be non-negative, got " +
                                        std::to_string(delay));
        }
        if (target < 0 || static_cast<std::size_t>(target) >= entities_.size()) {
            throw UnknownEntityError("schedule: unknown target entity " +
                                     std::to_string(target));
        }
        fel_.insert(Event{clock_ + delay, next_seq_++, source, target, tag,
                          std::move(payload)});
        ++scheduled_;
    }

    // Pops minimum-(time, seq) events until the list drains. Returns the
    // final clock; with an empty list the clock stays at 0.
    SimTime run() {
        if (state_ != State::Created) {
            throw LifecycleError("run: simulation already started");
        }
        state_ = State::Running;
        while (!fel_.empty()) {
            Event event = std::move(fel_.extract(fel_.begin()).value());
            clock_ = event.time;
            ++dispatched_;
            entities_[static_cast<std::size_t>(event.target)]->process(event, *this);
        }
        state_ = State::Finished;
        return clock_;
    }

    SimTime clock() const noexcept { return clock_; }
    State state() const noexcept { return state_; }
    std::size_t entity_count() const noexcept { return entities_.size(); }

    // Conservation counters: when run() returns, these are equal.
    std::uint64_t scheduled_count() const noexcept { return scheduled_; }
    std::uint64_t dispatched_count() const noexcept { return dispatched_; }

private:
    struct FelOrder {
        bool operator()(const Event& a, const Event& b) const noexcept {
            if (a.time != b.time) return a.time < b.time;
            return a.seq < b.seq;
        }
    };

    State state_ = State::Created;
    SimTime clock_ = 0.0;
    std::uint64_t next_seq_ = 0;
    std::uint64_t scheduled_ = 0;
    std::uint64_t dispatched_ = 0;
    std::vector<std::shared_ptr<Entity>> entities_;
    std::set<Event, FelOrder> fel_;
};

} // namespace csx::sim
