#include "bnrobot/network.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include "bnrobot/errors.hpp"
#include "json.hpp"

namespace bnr {

NetworkState::NetworkState(std::uint32_t n, std::uint64_t packed) : bits_(packed), n_(n) {
    if (n > kMaxNodes) throw CapacityError("NetworkState: node count " + std::to_string(n) +
                                           " exceeds limit " + std::to_string(kMaxNodes));
    if (n < 64 && (packed >> n) != 0)
        throw ValidationError("NetworkState: packed value has bits above node count");
}

NetworkState NetworkState::from_string(std::string_view s) {
    NetworkState st(static_cast<std::uint32_t>(s.size()));
    for (std::uint32_t i = 0; i < s.size(); ++i) {
        if (s[i] != '0' && s[i] != '1')
            throw ValidationError("NetworkState: bad character in bit string");
        st.set_bit(i, s[i] == '1');
    }
    return st;
}

std::string NetworkState::to_string() const {
    std::string s(n_, '0');
    for (std::uint32_t i = 0; i < n_; ++i)
        if (bit(i)) s[i] = '1';
    return s;
}

std::string NetworkState::display() const {
    std::string s = "(";
    for (std::uint32_t i = 0; i < n_; ++i) {
        if (i) s += ", ";
        s += bit(i) ? '1' : '0';
    }
    return s + ")";
}

bool NetworkState::lex_less(const NetworkState& other) const {
    for (std::uint32_t i = 0; i < n_ && i < other.n_; ++i) {
        if (bit(i) != other.bit(i)) return !bit(i);
    }
    return n_ < other.n_;
}

void BooleanNetwork::validate() const {
    const std::uint32_t num = n();
    if (num == 0) throw ValidationError("network: node count must be >= 1");
    if (num > kMaxNodes)
        throw CapacityError("network: node count " + std::to_string(num) + " exceeds limit " +
                            std::to_string(kMaxNodes));
    for (std::uint32_t i = 0; i < num; ++i) {
        const NetworkNode& nd = nodes[i];
        if (nd.sources.empty())
            throw ValidationError("network: node " + std::to_string(i) + " has no sources");
        if (nd.in_degree() > kMaxInDegree)
            throw CapacityError("network: node " + std::to_string(i) + " in-degree " +
                                std::to_string(nd.in_degree()) + " exceeds limit " +
                                std::to_string(kMaxInDegree));
        for (std::uint32_t s : nd.sources)
            if (s >= num)
                throw ValidationError("network: node " + std::to_string(i) + " source " +
                                      std::to_string(s) + " out of range [0, " +
                                      std::to_string(num) + ")");
        if (nd.table.size() != NetworkNode::table_words(nd.in_degree()))
            throw ValidationError("network: node " + std::to_string(i) +
                                  " table storage does not match 2^k rows");
    }
    auto check_ports = [num](const std::vector<NodePort>& ports, const char* kind) {
        std::vector<bool> seen(num, false);
        for (const NodePort& p : ports) {
            if (p.index >= num)
                throw ValidationError(std::string("network: ") + kind + " node index " +
                                      std::to_string(p.index) + " out of range");
            if (seen[p.index])
                throw ValidationError(std::string("network: duplicate ") + kind + " node " +
                                      std::to_string(p.index));
            seen[p.index] = true;
        }
    };
    check_ports(input_nodes, "input");
    check_ports(output_nodes, "output");
    for (const NodePort& in : input_nodes)
        for (const NodePort& out : output_nodes)
            if (in.index == out.index)
                throw ValidationError("network: node " + std::to_string(in.index) +
                                      " is both input and output");
}

BooleanNetwork random_network(std::uint32_t n, std::uint32_t k, bool no_self, Rng& rng) {
    if (n < 1) throw ValidationError("random_network: n must be >= 1, got " + std::to_string(n));
    if (n > kMaxNodes)
        throw CapacityError("random_network: n " + std::to_string(n) + " exceeds limit " +
                            std::to_string(kMaxNodes));
    if (k < 1) throw ValidationError("random_network: k must be >= 1, got " + std::to_string(k));
    if (k > kMaxInDegree)
        throw CapacityError("random_network: k " + std::to_string(k) + " exceeds limit " +
                            std::to_string(kMaxInDegree));
    const std::uint32_t max_k = no_self ? n - 1 : n;
    if (k > max_k)
        throw ValidationError("random_network: k (" + std::to_string(k) + ") exceeds " +
                              (no_self ? "n-1 (" : "n (") + std::to_string(max_k) +
                              (no_self ? ") with no_self set" : ")"));

    BooleanNetwork net;
    net.nodes.resize(n);
    std::vector<std::uint32_t> candidates;
    candidates.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        candidates.clear();
        for (std::uint32_t j = 0; j < n; ++j)
            if (!(no_self && j == i)) candidates.push_back(j);
        // partial Fisher-Yates: first k entries are a uniform ordered sample
        NetworkNode& nd = net.nodes[i];
        nd.sources.resize(k);
        for (std::uint32_t j = 0; j < k; ++j) {
            const std::size_t pick = j + rng.below(candidates.size() - j);
            std::swap(candidates[j], candidates[pick]);
            nd.sources[j] = candidates[j];
        }
        nd.table.assign(NetworkNode::table_words(k), 0);
        for (std::uint32_t row = 0; row < nd.rows(); ++row)
            nd.set_table_bit(row, rng.coin());
    }
    return net;
}

BooleanNetwork random_network(std::uint32_t n, std::uint32_t k, bool no_self, std::uint64_t seed) {
    Rng rng(seed);
    return random_network(n, k, no_self, rng);
}

std::uint64_t step_packed(const BooleanNetwork& net, std::uint64_t state) {
    std::uint64_t next = 0;
    const std::uint32_t n = net.n();
    for (std::uint32_t i = 0; i < n; ++i) {
        const NetworkNode& nd = net.nodes[i];
        std::uint32_t row = 0;
        for (std::uint32_t s : nd.sources) row = (row << 1) | ((state >> s) & 1u);
        next |= std::uint64_t{nd.table_bit(row)} << i;
    }
    return next;
}

NetworkState synchronous_step(const BooleanNetwork& net, const NetworkState& state) {
    if (state.size() != net.n())
        throw ValidationError("synchronous_step: state length " + std::to_string(state.size()) +
                              " does not match network size " + std::to_string(net.n()));
    return NetworkState(net.n(), step_packed(net, state.packed()));
}

BooleanNetwork flip_table_bit(const BooleanNetwork& net, std::uint32_t node, std::uint32_t row) {
    if (node >= net.n())
        throw ValidationError("flip_table_bit: node " + std::to_string(node) +
                              " out of range [0, " + std::to_string(net.n()) + ")");
    if (row >= net.nodes[node].rows())
        throw ValidationError("flip_table_bit: row " + std::to_string(row) + " out of range [0, " +
                              std::to_string(net.nodes[node].rows()) + ")");
    BooleanNetwork out = net;
    out.nodes[node].flip_table_bit(row);
    return out;
}

std::string table_bits(const BooleanNetwork& net) {
    std::string bits;
    for (const NetworkNode& nd : net.nodes)
        for (std::uint32_t row = 0; row < nd.rows(); ++row)
            bits += nd.table_bit(row) ? '1' : '0';
    return bits;
}

std::string topology_signature(const BooleanNetwork& net) {
    std::ostringstream os;
    for (const NetworkNode& nd : net.nodes) {
        for (std::uint32_t s : nd.sources) os << s << ',';
        os << ';';
    }
    return os.str();
}

std::uint64_t table_hamming_distance(const BooleanNetwork& a, const BooleanNetwork& b) {
    const std::string ta = table_bits(a), tb = table_bits(b);
    if (ta.size() != tb.size())
        throw ValidationError("table_hamming_distance: table sizes differ");
    std::uint64_t d = 0;
    for (std::size_t i = 0; i < ta.size(); ++i) d += ta[i] != tb[i];
    return d;
}

namespace {

constexpr int kFormatVersion = 1;

nlohmann::ordered_json ports_to_json(const std::vector<NodePort>& ports) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const NodePort& p : ports) {
        nlohmann::ordered_json o;
        o["index"] = p.index;
        o["role"] = p.role;
        arr.push_back(std::move(o));
    }
    return arr;
}

std::vector<NodePort> ports_from_json(const nlohmann::json& arr, const char* field) {
    if (!arr.is_array()) throw ValidationError(std::string("network file: '") + field + "' must be an array");
    std::vector<NodePort> ports;
    for (const auto& o : arr) {
        NodePort p;
        if (o.is_number_unsigned()) {
            p.index = o.get<std::uint32_t>();
        } else if (o.is_object()) {
            if (!o.contains("index"))
                throw ValidationError(std::string("network file: entry in '") + field +
                                      "' lacks 'index'");
            p.index = o.at("index").get<std::uint32_t>();
            if (o.contains("role")) p.role = o.at("role").get<std::string>();
        } else {
            throw ValidationError(std::string("network file: bad entry in '") + field + "'");
        }
        ports.push_back(std::move(p));
    }
    return ports;
}

} // namespace

std::string serialize_network(const BooleanNetwork& net) {
    net.validate();
    nlohmann::ordered_json j;
    j["format"] = "bn-network";
    j["format_version"] = kFormatVersion;
    j["n"] = net.n();
    nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
    for (const NetworkNode& nd : net.nodes) {
        nlohmann::ordered_json o;
        o["sources"] = nd.sources;
        std::string bits(nd.rows(), '0');
        for (std::uint32_t row = 0; row < nd.rows(); ++row)
            if (nd.table_bit(row)) bits[row] = '1';
        o["table"] = bits; // row 0 first
        nodes.push_back(std::move(o));
    }
    j["nodes"] = std::move(nodes);
    j["input_nodes"] = ports_to_json(net.input_nodes);
    j["output_nodes"] = ports_to_json(net.output_nodes);
    return j.dump(2) + "\n";
}

BooleanNetwork parse_network(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("network file: not valid JSON: ") + e.what());
    }
    try {
        if (j.value("format", std::string{}) != "bn-network")
            throw ValidationError("network file: missing or wrong 'format' tag (want \"bn-network\")");
        if (j.value("format_version", -1) != kFormatVersion)
            throw ValidationError("network file: unsupported 'format_version'");
        if (!j.contains("n")) throw ValidationError("network file: missing field 'n'");
        const auto n = j.at("n").get<std::uint32_t>();
        if (!j.contains("nodes")) throw ValidationError("network file: missing field 'nodes'");
        const auto& nodes = j.at("nodes");
        if (!nodes.is_array() || nodes.size() != n)
            throw ValidationError("network file: 'nodes' must be an array of length n=" +
                                  std::to_string(n));
        BooleanNetwork net;
        net.nodes.resize(n);
        for (std::uint32_t i = 0; i < n; ++i) {
            const auto& o = nodes[i];
            NetworkNode& nd = net.nodes[i];
            nd.sources = o.at("sources").get<std::vector<std::uint32_t>>();
            if (nd.sources.empty() || nd.in_degree() > kMaxInDegree)
                throw ValidationError("network file: node " + std::to_string(i) +
                                      " has unsupported in-degree");
            const auto bits = o.at("table").get<std::string>();
            if (bits.size() != nd.rows())
                throw ValidationError("network file: node " + std::to_string(i) + " table has " +
                                      std::to_string(bits.size()) + " rows, expected " +
                                      std::to_string(nd.rows()));
            nd.table.assign(NetworkNode::table_words(nd.in_degree()), 0);
            for (std::uint32_t row = 0; row < nd.rows(); ++row) {
                if (bits[row] != '0' && bits[row] != '1')
                    throw ValidationError("network file: node " + std::to_string(i) +
                                          " table contains a character other than 0/1");
                nd.set_table_bit(row, bits[row] == '1');
            }
        }
        if (j.contains("input_nodes")) net.input_nodes = ports_from_json(j.at("input_nodes"), "input_nodes");
        if (j.contains("output_nodes"))
            net.output_nodes = ports_from_json(j.at("output_nodes"), "output_nodes");
        net.validate();
        return net;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("network file: malformed field: ") + e.what());
    }
}

void save_network(const BooleanNetwork& net, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << serialize_network(net);
    if (!out) throw IoError("write failed: " + path);
}

BooleanNetwork load_network(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open network file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_network(ss.str());
}

} // namespace bnr
