#include "bnrobot/config.hpp"

#include <fstream>
#include <sstream>

#include "bnrobot/errors.hpp"
#include "json.hpp"

namespace bnr {

namespace {

void reject_unknown(const nlohmann::json& obj, std::initializer_list<const char*> known,
                    const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) {
                ok = true;
                break;
            }
        if (!ok)
            throw ValidationError("config: unknown field '" + where + it.key() + "'");
    }
}

template <typename T>
void read(const nlohmann::json& obj, const char* key, T& out, const std::string& where) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ValidationError("config: field '" + where + key + "' has the wrong type (value " +
                              obj.at(key).dump() + ")");
    }
}

} // namespace

ExperimentConfig parse_experiment_config(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("config: not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("config: top level must be a JSON object");

    // A manifest embeds the resolved config under "config".
    if (j.value("format", std::string{}) == "bnrobot-manifest") {
        if (!j.contains("config"))
            throw ValidationError("config: manifest lacks the 'config' snapshot");
        j = j.at("config");
        if (!j.is_object()) throw ValidationError("config: manifest 'config' must be an object");
    }

    reject_unknown(j, {"arena", "search", "experiment"}, "");
    ExperimentConfig cfg;

    if (j.contains("arena")) {
        const auto& a = j.at("arena");
        if (!a.is_object()) throw ValidationError("config: 'arena' must be an object");
        reject_unknown(a,
                       {"side", "light_x", "light_y", "wheel_speed", "axle_length", "robot_radius",
                        "dt", "start_radius"},
                       "arena.");
        read(a, "side", cfg.arena.side, "arena.");
        read(a, "light_x", cfg.arena.light_x, "arena.");
        read(a, "light_y", cfg.arena.light_y, "arena.");
        read(a, "wheel_speed", cfg.arena.wheel_speed, "arena.");
        read(a, "axle_length", cfg.arena.axle_length, "arena.");
        read(a, "robot_radius", cfg.arena.robot_radius, "arena.");
        read(a, "dt", cfg.arena.dt, "arena.");
        read(a, "start_radius", cfg.arena.start_radius, "arena.");
    }
    if (j.contains("search")) {
        const auto& s = j.at("search");
        if (!s.is_object()) throw ValidationError("config: 'search' must be an object");
        reject_unknown(s,
                       {"nodes", "in_degree", "total_iterations", "stage1_iterations",
                        "stage1_horizon", "stage2_horizon", "clap_min", "clap_max",
                        "training_set_size", "alpha"},
                       "search.");
        read(s, "nodes", cfg.search.nodes, "search.");
        read(s, "in_degree", cfg.search.in_degree, "search.");
        read(s, "total_iterations", cfg.search.total_iterations, "search.");
        read(s, "stage1_iterations", cfg.search.stage1_iterations, "search.");
        read(s, "stage1_horizon", cfg.search.stage1_horizon, "search.");
        read(s, "stage2_horizon", cfg.search.stage2_horizon, "search.");
        read(s, "clap_min", cfg.search.clap_window.lo, "search.");
        read(s, "clap_max", cfg.search.clap_window.hi, "search.");
        read(s, "training_set_size", cfg.search.training_set_size, "search.");
        read(s, "alpha", cfg.search.alpha, "search.");
    }
    if (j.contains("experiment")) {
        const auto& e = j.at("experiment");
        if (!e.is_object()) throw ValidationError("config: 'experiment' must be an object");
        reject_unknown(e, {"runs", "test_set_size", "master_seed"}, "experiment.");
        read(e, "runs", cfg.runs, "experiment.");
        read(e, "test_set_size", cfg.test_set_size, "experiment.");
        read(e, "master_seed", cfg.master_seed, "experiment.");
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_experiment_config(ss.str());
}

std::string serialize_experiment_config(const ExperimentConfig& cfg) {
    nlohmann::ordered_json j;
    j["arena"] = {{"side", cfg.arena.side},
                  {"light_x", cfg.arena.light_x},
                  {"light_y", cfg.arena.light_y},
                  {"wheel_speed", cfg.arena.wheel_speed},
                  {"axle_length", cfg.arena.axle_length},
                  {"robot_radius", cfg.arena.robot_radius},
                  {"dt", cfg.arena.dt},
                  {"start_radius", cfg.arena.start_radius}};
    j["search"] = {{"nodes", cfg.search.nodes},
                   {"in_degree", cfg.search.in_degree},
                   {"total_iterations", cfg.search.total_iterations},
                   {"stage1_iterations", cfg.search.stage1_iterations},
                   {"stage1_horizon", cfg.search.stage1_horizon},
                   {"stage2_horizon", cfg.search.stage2_horizon},
                   {"clap_min", cfg.search.clap_window.lo},
                   {"clap_max", cfg.search.clap_window.hi},
                   {"training_set_size", cfg.search.training_set_size},
                   {"alpha", cfg.search.alpha}};
    j["experiment"] = {{"runs", cfg.runs},
                       {"test_set_size", cfg.test_set_size},
                       {"master_seed", cfg.master_seed}};
    return j.dump(2);
}

} // namespace bnr
