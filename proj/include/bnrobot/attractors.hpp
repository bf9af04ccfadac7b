#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bnrobot/network.hpp"

namespace bnr {

// Exhaustive enumeration sweeps all 2^n states; refuse anything bigger.
inline constexpr std::uint32_t kExhaustiveAttractorLimit = 24;

struct AttractorInfo {
    // Cycle in canonical rotation: the lexicographically smallest state first,
    // successive states one synchronous step apart.
    std::vector<NetworkState> cycle;
    std::uint64_t basin_size = 0;

    std::uint32_t period() const { return static_cast<std::uint32_t>(cycle.size()); }
    bool fixed_point() const { return cycle.size() == 1; }
};

struct TrajectoryResult {
    // states[0] is the start; when a repeat was found, the final entry is the
    // second occurrence of the revisited state.
    std::vector<NetworkState> states;
    // Index (into `states`) of the first state that is revisited, i.e. the
    // cycle entry point. Empty if no repeat occurred within max_steps.
    std::optional<std::size_t> cycle_entry;

    std::optional<std::size_t> cycle_length() const {
        if (!cycle_entry) return std::nullopt;
        return states.size() - 1 - *cycle_entry;
    }
};

// Steps from `start` for at most max_steps updates, stopping early as soon as
// a previously seen state recurs.
TrajectoryResult trajectory(const BooleanNetwork& net, const NetworkState& start,
                            std::size_t max_steps);

struct AttractorAnalysis {
    // Sorted by canonical first cycle state (lexicographic), so equal networks
    // always report attractors in the same order.
    std::vector<AttractorInfo> attractors;
    // Packed state index -> position in `attractors`.
    std::vector<std::int32_t> basin_of;
};

// Full sweep of the 2^n state space. Throws CapacityError above the
// exhaustive limit.
AttractorAnalysis analyze_attractors(const BooleanNetwork& net);
std::vector<AttractorInfo> enumerate_attractors(const BooleanNetwork& net);

} // namespace bnr
