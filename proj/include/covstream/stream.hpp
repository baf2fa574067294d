#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "covstream/core.hpp"

namespace covstream {

/// Accounting proxy for streaming space: one stored element id = one entry,
/// whether it sits in a stored (set, element) projection or in a retained
/// universe subset. Per-set constant bookkeeping (ids, flags, counters) is
/// not charged.
class SpaceLedger {
public:
    void charge(std::uint64_t entries) {
        current_ += entries;
        if (current_ > peak_) peak_ = current_;
    }
    void discharge(std::uint64_t entries) {
        // current_entries never goes negative
        current_ = entries > current_ ? 0 : current_ - entries;
    }

    std::uint64_t current_entries() const { return current_; }
    std::uint64_t peak_entries() const { return peak_; }

private:
    std::uint64_t current_ = 0;
    std::uint64_t peak_ = 0;
};

enum class StreamOrder { adversarial, random };

/// A replayable, pass-counted view of a SetSystem. Each pass yields the sets
/// in a fixed order, each exactly once. A visitor receives each set as a
/// transient view; anything it keeps across passes must go through storage it
/// charges to a SpaceLedger (enforced by convention, audited in tests).
class SetStream {
public:
    static SetStream from_system(const SetSystem& system, StreamOrder order,
                                 Seed seed = Seed{0}) {
        SetStream s(system);
        if (order == StreamOrder::random) {
            Rng rng(seed);
            rng.shuffle(s.order_);
        }
        return s;
    }

    std::size_t universe_size() const { return system_->universe_size(); }
    std::size_t set_count() const { return system_->set_count(); }
    const std::vector<std::size_t>& order() const { return order_; }
    std::uint32_t passes_used() const { return passes_; }

    // An aborting visitor propagates its exception; the pass still counts.
    template <typename Visitor>
    void run_pass(Visitor&& visit) {
        ++passes_;
        for (std::size_t idx : order_) visit(idx, system_->set_at(idx));
    }

private:
    explicit SetStream(const SetSystem& system)
        : system_(&system), order_(system.set_count()) {
        std::iota(order_.begin(), order_.end(), std::size_t{0});
    }

    const SetSystem* system_;
    std::vector<std::size_t> order_;
    std::uint32_t passes_ = 0;
};

}  // namespace covstream
