#include "bnrobot/search.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "bnrobot/coupling.hpp"
#include "bnrobot/errors.hpp"
#include "bnrobot/objective.hpp"
#include "json.hpp"

namespace bnr {

void SearchConfig::validate() const {
    if (nodes < 7)
        throw ValidationError("search.nodes (" + std::to_string(nodes) +
                              ") must be >= 7 to hold the sensor and wheel roles");
    if (nodes > kMaxNodes)
        throw CapacityError("search.nodes (" + std::to_string(nodes) + ") exceeds limit " +
                            std::to_string(kMaxNodes));
    if (in_degree < 1 || in_degree > nodes - 1)
        throw ValidationError("search.in_degree (" + std::to_string(in_degree) +
                              ") must lie in [1, nodes-1] (no self-connections)");
    if (stage1_iterations > total_iterations)
        throw ValidationError("search.stage1_iterations (" + std::to_string(stage1_iterations) +
                              ") must be <= search.total_iterations (" +
                              std::to_string(total_iterations) + ")");
    if (stage1_horizon < 1)
        throw ValidationError("search.stage1_horizon must be >= 1");
    if (stage2_horizon < 2)
        throw ValidationError("search.stage2_horizon must be >= 2");
    if (clap_window.lo > clap_window.hi)
        throw ValidationError("search.clap_min (" + std::to_string(clap_window.lo) +
                              ") must be <= search.clap_max (" + std::to_string(clap_window.hi) +
                              ")");
    if (clap_window.lo < 1 || clap_window.hi >= stage2_horizon)
        throw ValidationError("search.clap window {" + std::to_string(clap_window.lo) + ".." +
                              std::to_string(clap_window.hi) +
                              "} must lie within (0, stage2_horizon=" +
                              std::to_string(stage2_horizon) + ")");
    if (training_set_size < 1)
        throw ValidationError("search.training_set_size must be >= 1");
    if (alpha < 0.0 || alpha > 1.0)
        throw ValidationError("search.alpha (" + std::to_string(alpha) + ") must lie in [0, 1]");
}

MoveProposal propose_move(const BooleanNetwork& net, Rng& rng) {
    MoveProposal mv;
    mv.node = static_cast<std::uint32_t>(rng.below(net.n()));
    mv.row = static_cast<std::uint32_t>(rng.below(net.nodes[mv.node].rows()));
    return mv;
}

RobotPose sample_start_pose(Rng& rng, const ArenaConfig& cfg) {
    const double ox = cfg.opposite_x();
    const double oy = cfg.opposite_y();
    // Quadrant of directions pointing from the start corner into the arena.
    double base;
    if (ox == 0.0) base = oy == 0.0 ? 0.0 : 3.0 * kPi / 2.0;
    else base = oy == 0.0 ? kPi / 2.0 : kPi;

    const double r = cfg.start_radius * std::sqrt(rng.unit()); // uniform by area
    const double phi = rng.range(base, base + kPi / 2.0);
    RobotPose pose;
    pose.x = std::clamp(ox + r * std::cos(phi), cfg.robot_radius, cfg.side - cfg.robot_radius);
    pose.y = std::clamp(oy + r * std::sin(phi), cfg.robot_radius, cfg.side - cfg.robot_radius);
    pose.heading = kPi - 2.0 * kPi * rng.unit(); // uniform in (-pi, pi]
    return pose;
}

std::vector<TrialSpec> build_training_set(std::uint64_t seed, std::uint32_t size, Stage stage,
                                          std::uint32_t horizon, ClapWindow window,
                                          const ArenaConfig& cfg) {
    if (size < 1) throw ValidationError("build_training_set: size must be >= 1");
    cfg.validate();
    Rng rng(seed);
    std::vector<TrialSpec> trials(size);
    for (TrialSpec& t : trials) {
        t.start = sample_start_pose(rng, cfg);
        t.horizon = horizon;
        t.stage = stage;
        t.clap_step = stage == Stage::full
                          ? window.lo + static_cast<std::uint32_t>(
                                            rng.below(window.hi - window.lo + 1))
                          : 0;
        t.perturb_step = 1 + static_cast<std::uint32_t>(rng.below(horizon));
        t.perturb_angle = rng.range(-kPi, kPi);
        t.validate();
    }
    return trials;
}

std::vector<TrialSpec> stage1_training_set(const SearchConfig& cfg, const ArenaConfig& arena) {
    return build_training_set(derive_seed(cfg.train_seed, "stage1"), cfg.training_set_size,
                              Stage::phototaxis_only, cfg.stage1_horizon, cfg.clap_window, arena);
}

std::vector<TrialSpec> stage2_training_set(const SearchConfig& cfg, const ArenaConfig& arena) {
    return build_training_set(derive_seed(cfg.train_seed, "stage2"), cfg.training_set_size,
                              Stage::full, cfg.stage2_horizon, cfg.clap_window, arena);
}

void descend_segment(BooleanNetwork& incumbent, double& incumbent_error,
                     std::uint32_t first_iteration, std::uint32_t iterations, int stage,
                     const std::function<double(const BooleanNetwork&)>& evaluate, Rng& move_rng,
                     std::vector<IterationRecord>* records, std::uint64_t* accepted_moves) {
    for (std::uint32_t j = 0; j < iterations; ++j) {
        const std::uint32_t iteration = first_iteration + j;
        const MoveProposal mv = propose_move(incumbent, move_rng);
        BooleanNetwork candidate = flip_table_bit(incumbent, mv.node, mv.row);
        const double candidate_error = evaluate(candidate);
        const bool accepted = accept(candidate_error, incumbent_error);
        if (accepted) {
            incumbent = std::move(candidate);
            incumbent_error = candidate_error;
            if (accepted_moves) ++*accepted_moves;
        }
        if (records)
            records->push_back(IterationRecord{iteration, stage, mv.node, mv.row, candidate_error,
                                               accepted, incumbent_error});
    }
}

SearchResult stochastic_descent(const SearchConfig& cfg, const ArenaConfig& arena,
                                const SearchCheckpoint* resume) {
    cfg.validate();
    arena.validate();

    const NodeRoles roles = NodeRoles::standard();
    const std::vector<TrialSpec> stage1 = stage1_training_set(cfg, arena);
    const std::vector<TrialSpec> stage2 = stage2_training_set(cfg, arena);
    const auto eval1 = [&](const BooleanNetwork& net) {
        return aggregate_error(net, roles, stage1, arena, cfg.alpha);
    };
    const auto eval2 = [&](const BooleanNetwork& net) {
        return aggregate_error(net, roles, stage2, arena, cfg.alpha);
    };

    SearchResult result;
    Rng move_rng(derive_seed(cfg.seed, "moves"));
    std::uint32_t done = 0; // iterations already completed

    if (resume) {
        if (resume->iteration > cfg.total_iterations)
            throw ValidationError("stochastic_descent: checkpoint iteration " +
                                  std::to_string(resume->iteration) +
                                  " is beyond total_iterations");
        resume->incumbent.validate();
        result.initial_network = resume->incumbent;
        result.initial_error = resume->incumbent_error;
        result.best_network = resume->incumbent;
        result.best_error = resume->incumbent_error;
        result.accepted_moves = resume->accepted_moves;
        move_rng.set_state(resume->move_rng_state);
        done = resume->iteration;
    } else {
        Rng init_rng(derive_seed(cfg.seed, "network-init"));
        BooleanNetwork net = random_network(cfg.nodes, cfg.in_degree, /*no_self=*/true, init_rng);
        roles.apply_to(net);
        result.initial_network = net;
        result.initial_error = eval1(net);
        result.best_network = std::move(net);
        result.best_error = result.initial_error;
    }

    result.records.reserve(cfg.total_iterations - done);
    if (done < cfg.stage1_iterations) {
        descend_segment(result.best_network, result.best_error, done + 1,
                        cfg.stage1_iterations - done, 1, eval1, move_rng, &result.records,
                        &result.accepted_moves);
        done = cfg.stage1_iterations;
    }
    if (done < cfg.total_iterations) {
        // The incumbent carries over; its error is re-measured under the
        // stage-2 objective before the descent continues.
        result.best_error = eval2(result.best_network);
        descend_segment(result.best_network, result.best_error, done + 1,
                        cfg.total_iterations - done, 2, eval2, move_rng, &result.records,
                        &result.accepted_moves);
    }
    result.move_rng_state = move_rng.state();
    return result;
}

SearchCheckpoint SearchResult::final_checkpoint(std::uint32_t total_iterations) const {
    SearchCheckpoint cp;
    cp.iteration = total_iterations;
    cp.incumbent = best_network;
    cp.incumbent_error = best_error;
    cp.accepted_moves = accepted_moves;
    cp.move_rng_state = move_rng_state;
    return cp;
}

void write_search_log(std::ostream& out, const std::vector<IterationRecord>& records) {
    out << "iteration,stage,candidate_error,accepted,incumbent_error\n";
    char buf[128];
    for (const IterationRecord& r : records) {
        std::snprintf(buf, sizeof buf, "%u,%d,%.12g,%d,%.12g\n", r.iteration, r.stage,
                      r.candidate_error, r.accepted ? 1 : 0, r.incumbent_error);
        out << buf;
    }
}

namespace {
constexpr int kCheckpointVersion = 1;
}

void save_checkpoint(const SearchCheckpoint& cp, const std::string& path) {
    nlohmann::ordered_json j;
    j["format"] = "bnrobot-checkpoint";
    j["format_version"] = kCheckpointVersion;
    j["iteration"] = cp.iteration;
    j["incumbent_error"] = cp.incumbent_error;
    j["accepted_moves"] = cp.accepted_moves;
    j["move_rng_state"] = cp.move_rng_state;
    j["incumbent"] = nlohmann::ordered_json::parse(serialize_network(cp.incumbent));
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
    if (!out) throw IoError("write failed: " + path);
}

SearchCheckpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open checkpoint file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(ss.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("checkpoint file: not valid JSON: ") + e.what());
    }
    try {
        if (j.value("format", std::string{}) != "bnrobot-checkpoint")
            throw ValidationError("checkpoint file: missing or wrong 'format' tag");
        if (j.value("format_version", -1) != kCheckpointVersion)
            throw ValidationError("checkpoint file: unsupported 'format_version'");
        SearchCheckpoint cp;
        cp.iteration = j.at("iteration").get<std::uint32_t>();
        cp.incumbent_error = j.at("incumbent_error").get<double>();
        cp.accepted_moves = j.at("accepted_moves").get<std::uint64_t>();
        cp.move_rng_state = j.at("move_rng_state").get<std::uint64_t>();
        cp.incumbent = parse_network(j.at("incumbent").dump());
        return cp;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("checkpoint file: malformed field: ") + e.what());
    }
}

} // namespace bnr
