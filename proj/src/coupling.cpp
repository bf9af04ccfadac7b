#include "bnrobot/coupling.hpp"

#include <string>

#include "bnrobot/errors.hpp"

namespace bnr {

std::uint8_t gray_encode(int sector) {
    if (sector < 1 || sector > 8)
        throw ValidationError("gray_encode: sector " + std::to_string(sector) +
                              " out of range {1..8}");
    const auto s = static_cast<std::uint8_t>(sector);
    return static_cast<std::uint8_t>(s ^ (s >> 1));
}

void NodeRoles::validate(std::uint32_t n) const {
    const std::uint32_t idx[7] = {sound,      light[0],   light[1],    light[2],
                                  light[3],   wheel_left, wheel_right};
    for (int i = 0; i < 7; ++i) {
        if (idx[i] >= n)
            throw ValidationError("node roles: index " + std::to_string(idx[i]) +
                                  " out of range for a " + std::to_string(n) + "-node network");
        for (int j = i + 1; j < 7; ++j)
            if (idx[i] == idx[j])
                throw ValidationError("node roles: index " + std::to_string(idx[i]) +
                                      " assigned to two roles");
    }
}

NodeRoles NodeRoles::from_network(const BooleanNetwork& net) {
    NodeRoles roles;
    bool have[7] = {};
    auto assign = [&](const NodePort& p) {
        int slot = -1;
        if (p.role == "sound") { roles.sound = p.index; slot = 0; }
        else if (p.role == "light0") { roles.light[0] = p.index; slot = 1; }
        else if (p.role == "light1") { roles.light[1] = p.index; slot = 2; }
        else if (p.role == "light2") { roles.light[2] = p.index; slot = 3; }
        else if (p.role == "light3") { roles.light[3] = p.index; slot = 4; }
        else if (p.role == "wheel_left") { roles.wheel_left = p.index; slot = 5; }
        else if (p.role == "wheel_right") { roles.wheel_right = p.index; slot = 6; }
        else
            throw ValidationError("node roles: unknown role tag '" + p.role + "' on node " +
                                  std::to_string(p.index));
        if (have[slot])
            throw ValidationError("node roles: role '" + p.role + "' appears twice");
        have[slot] = true;
    };
    for (const NodePort& p : net.input_nodes) assign(p);
    for (const NodePort& p : net.output_nodes) assign(p);
    for (int i = 0; i < 7; ++i)
        if (!have[i])
            throw ValidationError("node roles: network file does not tag all of sound, "
                                  "light0..light3, wheel_left, wheel_right");
    roles.validate(net.n());
    return roles;
}

void NodeRoles::apply_to(BooleanNetwork& net) const {
    validate(net.n());
    net.input_nodes = {{sound, "sound"},
                       {light[0], "light0"},
                       {light[1], "light1"},
                       {light[2], "light2"},
                       {light[3], "light3"}};
    net.output_nodes = {{wheel_left, "wheel_left"}, {wheel_right, "wheel_right"}};
}

std::uint64_t NodeRoles::input_mask() const {
    std::uint64_t m = std::uint64_t{1} << sound;
    for (std::uint32_t l : light) m |= std::uint64_t{1} << l;
    return m;
}

std::uint64_t clamp_frame(const NodeRoles& roles, std::uint64_t state, const SensorFrame& frame) {
    const std::uint8_t g = gray_encode(frame.sector);
    std::uint64_t s = state & ~roles.input_mask();
    s |= std::uint64_t{frame.sound != 0} << roles.sound;
    for (int b = 0; b < 4; ++b)
        s |= std::uint64_t{(g >> (3 - b)) & 1u} << roles.light[b]; // light[0] = MSB
    return s;
}

std::uint64_t controller_step_packed(const BooleanNetwork& net, const NodeRoles& roles,
                                     std::uint64_t state, const SensorFrame& frame) {
    const std::uint64_t clamped = clamp_frame(roles, state, frame);
    const std::uint64_t mask = roles.input_mask();
    // Input nodes pass through unchanged: their stored tables are never read.
    return (step_packed(net, clamped) & ~mask) | (clamped & mask);
}

ControlOutput controller_step(const BooleanNetwork& net, const NodeRoles& roles,
                              const NetworkState& state, const SensorFrame& frame) {
    if (state.size() != net.n())
        throw ValidationError("controller_step: state length does not match network size");
    roles.validate(net.n());
    const std::uint64_t next = controller_step_packed(net, roles, state.packed(), frame);
    ControlOutput out{NetworkState(net.n(), next),
                      WheelCommand{((next >> roles.wheel_left) & 1u) != 0,
                                   ((next >> roles.wheel_right) & 1u) != 0}};
    return out;
}

ControlOutput controller_step(const BooleanNetwork& net, const NetworkState& state,
                              const SensorFrame& frame) {
    return controller_step(net, NodeRoles::from_network(net), state, frame);
}

NetworkState initial_state(const BooleanNetwork& net) { return NetworkState(net.n(), 0); }

NetworkState random_state(const BooleanNetwork& net, Rng& rng) {
    NetworkState st(net.n(), 0);
    for (std::uint32_t i = 0; i < net.n(); ++i) st.set_bit(i, rng.coin());
    return st;
}

} // namespace bnr
