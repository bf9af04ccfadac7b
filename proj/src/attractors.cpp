#include "bnrobot/attractors.hpp"

#include <algorithm>
#include <unordered_map>

#include "bnrobot/errors.hpp"

namespace bnr {

TrajectoryResult trajectory(const BooleanNetwork& net, const NetworkState& start,
                            std::size_t max_steps) {
    if (start.size() != net.n())
        throw ValidationError("trajectory: state length does not match network size");
    if (max_steps < 1) throw ValidationError("trajectory: max_steps must be >= 1");

    TrajectoryResult out;
    out.states.reserve(std::min<std::size_t>(max_steps + 1, 4096));
    std::unordered_map<std::uint64_t, std::size_t> seen;
    std::uint64_t s = start.packed();
    out.states.push_back(start);
    seen.emplace(s, 0);
    for (std::size_t step = 1; step <= max_steps; ++step) {
        s = step_packed(net, s);
        out.states.emplace_back(net.n(), s);
        auto [it, inserted] = seen.emplace(s, step);
        if (!inserted) {
            out.cycle_entry = it->second;
            break;
        }
    }
    return out;
}

namespace {

// Rotate so the lexicographically smallest state comes first. Lexicographic
// order on node values equals numeric order on bit-reversed packed words; for
// cycle lengths seen here a direct scan is cheap enough.
void canonicalize_cycle(std::vector<NetworkState>& cycle) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < cycle.size(); ++i)
        if (cycle[i].lex_less(cycle[best])) best = i;
    std::rotate(cycle.begin(), cycle.begin() + static_cast<std::ptrdiff_t>(best), cycle.end());
}

} // namespace

AttractorAnalysis analyze_attractors(const BooleanNetwork& net) {
    net.validate();
    const std::uint32_t n = net.n();
    if (n > kExhaustiveAttractorLimit)
        throw CapacityError("analyze_attractors: n=" + std::to_string(n) +
                            " exceeds the exhaustive bound of " +
                            std::to_string(kExhaustiveAttractorLimit) +
                            " nodes (2^n state sweep); use sampled trajectories instead");

    const std::uint64_t space = std::uint64_t{1} << n;
    // -1 unvisited; -(pos+2) on the current path at position pos; >=0 assigned.
    std::vector<std::int32_t> mark(space, -1);
    AttractorAnalysis analysis;
    std::vector<std::uint64_t> path;

    for (std::uint64_t start = 0; start < space; ++start) {
        if (mark[start] >= 0) continue;
        path.clear();
        std::uint64_t s = start;
        while (mark[s] == -1) {
            mark[s] = -static_cast<std::int32_t>(path.size()) - 2;
            path.push_back(s);
            s = step_packed(net, s);
        }
        std::int32_t attractor_id;
        if (mark[s] >= 0) {
            attractor_id = mark[s];
        } else {
            // s sits on the current path: everything from there on is a new cycle
            const std::size_t pos = static_cast<std::size_t>(-mark[s] - 2);
            AttractorInfo info;
            info.cycle.reserve(path.size() - pos);
            for (std::size_t i = pos; i < path.size(); ++i)
                info.cycle.emplace_back(n, path[i]);
            canonicalize_cycle(info.cycle);
            attractor_id = static_cast<std::int32_t>(analysis.attractors.size());
            analysis.attractors.push_back(std::move(info));
        }
        for (std::uint64_t q : path) mark[q] = attractor_id;
    }

    // Canonical report order: by first cycle state.
    std::vector<std::size_t> order(analysis.attractors.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return analysis.attractors[a].cycle[0].lex_less(analysis.attractors[b].cycle[0]);
    });
    std::vector<std::int32_t> remap(order.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        remap[order[i]] = static_cast<std::int32_t>(i);

    std::vector<AttractorInfo> sorted;
    sorted.reserve(order.size());
    for (std::size_t i : order) sorted.push_back(std::move(analysis.attractors[i]));
    analysis.attractors = std::move(sorted);

    analysis.basin_of.resize(space);
    for (std::uint64_t s = 0; s < space; ++s) {
        const std::int32_t id = remap[static_cast<std::size_t>(mark[s])];
        analysis.basin_of[s] = id;
        ++analysis.attractors[static_cast<std::size_t>(id)].basin_size;
    }
    return analysis;
}

std::vector<AttractorInfo> enumerate_attractors(const BooleanNetwork& net) {
    return analyze_attractors(net).attractors;
}

} // namespace bnr
