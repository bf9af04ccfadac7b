#pragma once

#include <array>
#include <cstdint>

#include "bnrobot/arena.hpp"
#include "bnrobot/network.hpp"

namespace bnr {

struct SensorFrame {
    int sector = 1; // light sector id in {1..8}
    int sound = 0;  // 1 only on the step the clap is perceived
};

// Binary-reflected Gray code of the sector id, 4 bits: g = s XOR (s div 2).
// Bit 3 is the most significant; consecutive sector ids differ in one bit.
std::uint8_t gray_encode(int sector);

// Where the controller roles live inside a network. The conventional layout
// puts the sound sensor on node 0, the four Gray bits of the light sector on
// nodes 1..4 (node 1 = most significant) and the wheels on nodes 5 and 6.
struct NodeRoles {
    std::uint32_t sound = 0;
    std::array<std::uint32_t, 4> light{1, 2, 3, 4};
    std::uint32_t wheel_left = 5;
    std::uint32_t wheel_right = 6;

    static NodeRoles standard() { return NodeRoles{}; }
    // Reads the role tags stored in the network's port lists.
    static NodeRoles from_network(const BooleanNetwork& net);
    // Writes port lists with role tags onto the network.
    void apply_to(BooleanNetwork& net) const;

    void validate(std::uint32_t n) const;
    std::uint64_t input_mask() const;
};

struct ControlOutput {
    NetworkState state;
    WheelCommand command;
};

// Packed-word fast path: clamp the frame onto the input nodes, update all
// non-input nodes synchronously (a clamped bit is never overwritten within
// the step), and leave the wheel bits readable in the result.
std::uint64_t clamp_frame(const NodeRoles& roles, std::uint64_t state, const SensorFrame& frame);
std::uint64_t controller_step_packed(const BooleanNetwork& net, const NodeRoles& roles,
                                     std::uint64_t state, const SensorFrame& frame);

// Value-type wrapper: returns the post-update state and the wheel command read
// from the output nodes.
ControlOutput controller_step(const BooleanNetwork& net, const NodeRoles& roles,
                              const NetworkState& state, const SensorFrame& frame);
// Convenience overload resolving roles from the network's port tags.
ControlOutput controller_step(const BooleanNetwork& net, const NetworkState& state,
                              const SensorFrame& frame);

// Controller start state: all zeros.
NetworkState initial_state(const BooleanNetwork& net);
// Seeded-random alternative for robustness studies.
NetworkState random_state(const BooleanNetwork& net, Rng& rng);

} // namespace bnr
