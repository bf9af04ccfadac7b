#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "bnrobot/arena.hpp"
#include "bnrobot/network.hpp"
#include "bnrobot/rng.hpp"

namespace bnr {

struct ClapWindow {
    std::uint32_t lo = 500;
    std::uint32_t hi = 650; // inclusive
};

struct SearchConfig {
    std::uint32_t nodes = 20;
    std::uint32_t in_degree = 3; // no self-connections
    std::uint32_t total_iterations = 25000;
    std::uint32_t stage1_iterations = 5000;
    std::uint32_t stage1_horizon = 500;  // steps, no clap
    std::uint32_t stage2_horizon = 1000; // steps, clap enabled
    ClapWindow clap_window{};
    std::uint32_t training_set_size = 30;
    double alpha = 0.5;
    std::uint64_t seed = 1;       // drives network init and move proposals
    std::uint64_t train_seed = 1; // drives trial-set generation; shared across
                                  // the runs of one experiment

    void validate() const;
};

struct MoveProposal {
    std::uint32_t node = 0;
    std::uint32_t row = 0;
};

// Uniform over nodes, then uniform over that node's 2^k truth-table rows.
MoveProposal propose_move(const BooleanNetwork& net, Rng& rng);

// Sideways moves are accepted: candidate <= incumbent.
inline bool accept(double candidate_error, double incumbent_error) {
    return candidate_error <= incumbent_error;
}

struct IterationRecord {
    std::uint32_t iteration = 0;
    int stage = 1;
    std::uint32_t node = 0;
    std::uint32_t row = 0;
    double candidate_error = 0.0;
    bool accepted = false;
    double incumbent_error = 0.0;
};

struct SearchCheckpoint {
    std::uint32_t iteration = 0; // iterations completed so far
    BooleanNetwork incumbent;
    double incumbent_error = 1.0;
    std::uint64_t accepted_moves = 0;
    std::uint64_t move_rng_state = 0;
};

struct SearchResult {
    BooleanNetwork initial_network;
    double initial_error = 1.0; // under the stage-1 objective
    BooleanNetwork best_network;
    double best_error = 1.0; // under the objective active at the last iteration
    std::vector<IterationRecord> records;
    std::uint64_t accepted_moves = 0;
    std::uint64_t move_rng_state = 0; // after the last iteration; checkpoint material

    // Snapshot of the search end state, resumable via stochastic_descent.
    SearchCheckpoint final_checkpoint(std::uint32_t total_iterations) const;
};

// Uniform start pose: position in the quarter-disc of start_radius around the
// corner opposite the light (clamped to the walls), heading in (-pi, pi].
RobotPose sample_start_pose(Rng& rng, const ArenaConfig& cfg);

// Fixed trial set for one stage. Per trial the draws are, in order: start
// radius, start angle, heading, clap step (full stage only), perturbation
// step, perturbation angle.
std::vector<TrialSpec> build_training_set(std::uint64_t seed, std::uint32_t size, Stage stage,
                                          std::uint32_t horizon, ClapWindow window,
                                          const ArenaConfig& cfg);

// The trial sets a descent with this config uses, exposed so callers can
// re-evaluate networks on exactly the same trials.
std::vector<TrialSpec> stage1_training_set(const SearchConfig& cfg, const ArenaConfig& arena);
std::vector<TrialSpec> stage2_training_set(const SearchConfig& cfg, const ArenaConfig& arena);

// Generic single-stage descent: propose one flip, evaluate, accept if not
// worse. Exposed for tests that drive it with synthetic objectives.
void descend_segment(BooleanNetwork& incumbent, double& incumbent_error,
                     std::uint32_t first_iteration, std::uint32_t iterations, int stage,
                     const std::function<double(const BooleanNetwork&)>& evaluate, Rng& move_rng,
                     std::vector<IterationRecord>* records, std::uint64_t* accepted_moves);

void save_checkpoint(const SearchCheckpoint& cp, const std::string& path);
SearchCheckpoint load_checkpoint(const std::string& path);

// The staged stochastic descent: a fresh random network, stage-1 trials for
// the first stage1_iterations, then the incumbent is re-evaluated under the
// stage-2 objective and the descent continues on stage-2 trials. Pass a
// checkpoint to resume; the result then covers only the resumed iterations.
SearchResult stochastic_descent(const SearchConfig& cfg, const ArenaConfig& arena,
                                const SearchCheckpoint* resume = nullptr);

// Spec'd log format: iteration,stage,candidate_error,accepted,incumbent_error.
void write_search_log(std::ostream& out, const std::vector<IterationRecord>& records);

} // namespace bnr
