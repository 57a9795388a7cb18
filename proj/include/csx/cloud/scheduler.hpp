#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "csx/cloud/types.hpp"

namespace csx::cloud {

// Extension point: decides how the cloudlets on one VM share its capacity.
class CloudletScheduler {
public:
    struct UpdateResult {
        std::vector<Cloudlet> finished;          // marked Success, in completion order
        std::optional<sim::SimTime> nextCompletion;
    };

    virtual ~CloudletScheduler() = default;
    virtual void submit(Cloudlet cloudlet, sim::SimTime now) = 0;
    // Progresses all running cloudlets to `now`. Never increases remainingMi.
    virtual UpdateResult update(sim::SimTime now, double vmTotalMips) = 0;
    virtual const std::vector<Cloudlet>& running() const = 0;
};

// Time shared: the VM's total MIPS is divided equally among running
// cloudlets. A cloudlet whose remaining work drops within rounding range of
// zero (relative 1e-12 of its length) is complete.
class TimeSharedScheduler final : public CloudletScheduler {
public:
    void submit(Cloudlet cloudlet, sim::SimTime now) override {
        cloudlet.remainingMi = cloudlet.lengthMi;
        cloudlet.status = CloudletStatus::Running;
        cloudlet.startTime = now;
        running_.push_back(std::move(cloudlet));
        last_update_ = now;
    }

    UpdateResult update(sim::SimTime now, double vmTotalMips) override {
        if (!(vmTotalMips > 0.0)) {
            throw SimulationError("time-shared scheduler: vm capacity must be positive");
        }
        UpdateResult result;
        if (running_.empty()) {
            last_update_ = now;
            return result;
        }

        const double elapsed = std::max(0.0, now - last_update_);
        const double rate = vmTotalMips / static_cast<double>(running_.size());
        last_update_ = now;

        for (auto it = running_.begin(); it != running_.end();) {
            it->remainingMi = std::max(0.0, it->remainingMi - rate * elapsed);
            if (it->remainingMi <= completion_slack(*it)) {
                it->remainingMi = 0.0;
                it->status = CloudletStatus::Success;
                it->finishTime = now;
                result.finished.push_back(std::move(*it));
                it = running_.erase(it);
            } else {
                ++it;
            }
        }

        if (!running_.empty()) {
            const double newRate =
                vmTotalMips / static_cast<double>(running_.size());
            double minRemaining = running_.front().remainingMi;
            for (const Cloudlet& c : running_) {
                minRemaining = std::min(minRemaining, c.remainingMi);
            }
            sim::SimTime next = now + minRemaining / newRate;
            if (!(next > now)) {
                // remaining/rate underflowed against the clock magnitude
                next = std::nextafter(now, std::numeric_limits<sim::SimTime>::infinity());
            }
            result.nextCompletion = next;
        }
        return result;
    }

    const std::vector<Cloudlet>& running() const override { return running_; }

private:
    static double completion_slack(const Cloudlet& c) noexcept {
        return c.lengthMi * 1e-12;
    }

    sim::SimTime last_update_ = 0.0;
    std::vector<Cloudlet> running_;
};

} // namespace csx::cloud
