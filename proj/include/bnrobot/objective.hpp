#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "bnrobot/arena.hpp"
#include "bnrobot/coupling.hpp"
#include "bnrobot/network.hpp"

namespace bnr {

// Per-step direction labels of one episode.
struct TrialTrace {
    std::vector<StepLabel> labels; // labels[i-1] belongs to step i
    std::uint32_t clap_step = 0;
    std::uint32_t horizon = 0;
    Stage stage = Stage::full;
};

struct ErrorReport {
    double error = 0.0;
    double phototaxis_term = 0.0;     // 1 - (toward steps before/at the clap) / t_c
    double antiphototaxis_term = 0.0; // 1 - (away steps after the clap) / (T - t_c)
    double alpha = 0.5;
};

// Full stage:   E = alpha * phototaxis_term + (1 - alpha) * antiphototaxis_term
// Pure stage:   E = 1 - (toward steps) / T   (reported in phototaxis_term,
//               antiphototaxis_term = 0, alpha forced to 1)
ErrorReport trial_error(const TrialTrace& trace, double alpha);

// One exported trajectory row. The pose is the one reached after the step's
// motion; sector/sound are the sensor values the controller saw that step.
struct TrialStepRow {
    std::uint32_t t = 0;
    double x = 0, y = 0, heading = 0;
    int sector = 1;
    int sound = 0;
    int left = 0, right = 0;
    double dist = 0;
    StepLabel label = StepLabel::neither;
};

// Runs one episode: per step, apply the scheduled perturbation, sense, update
// the network, actuate, label the motion. The controller always starts from
// the all-zeros state, so a trial is a pure function of its arguments.
TrialTrace run_trial(const BooleanNetwork& net, const NodeRoles& roles, const TrialSpec& spec,
                     const ArenaConfig& cfg, std::vector<TrialStepRow>* rows = nullptr);

// Same episode, returning only the error; the hot path for search.
double run_trial_error(const BooleanNetwork& net, const NodeRoles& roles, const TrialSpec& spec,
                       const ArenaConfig& cfg, double alpha);

std::vector<double> per_trial_errors(const BooleanNetwork& net, const NodeRoles& roles,
                                     const std::vector<TrialSpec>& trials, const ArenaConfig& cfg,
                                     double alpha, unsigned parallelism = 1);

// Mean error over a trial set. The per-trial values are summed in sorted
// order, so the result is independent of trial order and thread count.
double aggregate_error(const BooleanNetwork& net, const NodeRoles& roles,
                       const std::vector<TrialSpec>& trials, const ArenaConfig& cfg, double alpha,
                       unsigned parallelism = 1);

void write_trajectory_csv(std::ostream& out, const std::vector<TrialStepRow>& rows);

} // namespace bnr
