#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bnrobot/rng.hpp"

namespace bnr {

// Hard implementation bounds. States are packed into one 64-bit word, so the
// node count is capped; the in-degree cap keeps truth tables at a sane size.
inline constexpr std::uint32_t kMaxNodes = 64;
inline constexpr std::uint32_t kMaxInDegree = 20;

// State of an n-node network. Bit i of the packed word holds node i, so the
// packed value doubles as a state index in [0, 2^n).
class NetworkState {
public:
    NetworkState() = default;
    NetworkState(std::uint32_t n, std::uint64_t packed = 0);

    // Parses "010...": character j is node j's value.
    static NetworkState from_string(std::string_view s);

    std::uint32_t size() const { return n_; }
    std::uint64_t packed() const { return bits_; }

    bool bit(std::uint32_t i) const { return (bits_ >> i) & 1u; }
    void set_bit(std::uint32_t i, bool v) {
        bits_ = (bits_ & ~(std::uint64_t{1} << i)) | (std::uint64_t{v} << i);
    }

    std::string to_string() const;
    // Paper-style tuple display, e.g. "(0, 0, 1)".
    std::string display() const;

    bool operator==(const NetworkState&) const = default;

    // Lexicographic order on (node 0, node 1, ...). Used to canonicalize
    // attractor cycles.
    bool lex_less(const NetworkState& other) const;

private:
    std::uint64_t bits_ = 0;
    std::uint32_t n_ = 0;
};

struct NetworkNode {
    // Ordered sources; sources[0] supplies the most significant bit of the
    // truth-table row index.
    std::vector<std::uint32_t> sources;
    // 2^k rows, bit-packed; row r lives at bit (r & 63) of word (r >> 6).
    std::vector<std::uint64_t> table;

    std::uint32_t in_degree() const { return static_cast<std::uint32_t>(sources.size()); }
    std::uint32_t rows() const { return 1u << sources.size(); }

    bool table_bit(std::uint32_t row) const { return (table[row >> 6] >> (row & 63)) & 1u; }
    void set_table_bit(std::uint32_t row, bool v) {
        table[row >> 6] = (table[row >> 6] & ~(std::uint64_t{1} << (row & 63))) |
                          (std::uint64_t{v} << (row & 63));
    }
    void flip_table_bit(std::uint32_t row) { table[row >> 6] ^= std::uint64_t{1} << (row & 63); }

    static std::uint32_t table_words(std::uint32_t k) {
        return ((1u << k) + 63u) / 64u;
    }

    bool operator==(const NetworkNode&) const = default;
};

// A node index paired with its role tag ("sound", "light0".."light3",
// "wheel_left", "wheel_right"); the tag may be empty for untyped ports.
struct NodePort {
    std::uint32_t index = 0;
    std::string role;

    bool operator==(const NodePort&) const = default;
};

struct BooleanNetwork {
    std::vector<NetworkNode> nodes;
    std::vector<NodePort> input_nodes;
    std::vector<NodePort> output_nodes;

    std::uint32_t n() const { return static_cast<std::uint32_t>(nodes.size()); }

    // Throws ValidationError when an invariant is broken: source index out of
    // range, table size not matching 2^k, duplicate or overlapping ports.
    void validate() const;

    bool operator==(const BooleanNetwork&) const = default;
};

// Uniform random network: each node gets k distinct sources (excluding itself
// when no_self is set) and an independent fair coin per truth-table bit.
BooleanNetwork random_network(std::uint32_t n, std::uint32_t k, bool no_self, Rng& rng);
BooleanNetwork random_network(std::uint32_t n, std::uint32_t k, bool no_self, std::uint64_t seed);

// One synchronous deterministic update of every node.
NetworkState synchronous_step(const BooleanNetwork& net, const NetworkState& state);

// Packed-word fast path used by the simulation loop. Bits at positions >= n
// must be zero.
std::uint64_t step_packed(const BooleanNetwork& net, std::uint64_t state);

// Returns a copy differing from `net` in exactly one truth-table bit.
BooleanNetwork flip_table_bit(const BooleanNetwork& net, std::uint32_t node, std::uint32_t row);

// Concatenated truth-table bits (row 0 first, node 0 first); the topology
// signature covers the source lists only. Together they let callers check
// move locality: a flip changes exactly one character of table_bits and none
// of topology_signature.
std::string table_bits(const BooleanNetwork& net);
std::string topology_signature(const BooleanNetwork& net);
std::uint64_t table_hamming_distance(const BooleanNetwork& a, const BooleanNetwork& b);

// JSON serialization. Round-trips are bit-exact.
std::string serialize_network(const BooleanNetwork& net);
BooleanNetwork parse_network(const std::string& text);
void save_network(const BooleanNetwork& net, const std::string& path);
BooleanNetwork load_network(const std::string& path);

} // namespace bnr
