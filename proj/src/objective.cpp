#include "bnrobot/objective.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "bnrobot/errors.hpp"
#include "bnrobot/parallel.hpp"

namespace bnr {

namespace {

// Flattened network image for the inner loop: contiguous, branch-light, and
// bit-identical to step_packed. Input nodes are skipped entirely (they pass
// through via the clamp mask). Only built when every table fits one word.
struct CompiledNode {
    std::uint8_t k = 0;
    std::array<std::uint8_t, 7> src{};
    std::uint64_t word = 0;
};

struct CompiledController {
    std::vector<CompiledNode> nodes; // non-input nodes, paired with `bits`
    std::vector<std::uint32_t> bits; // output bit position per compiled node
    std::uint64_t input_mask = 0;
    bool usable = false;

    static CompiledController build(const BooleanNetwork& net, const NodeRoles& roles) {
        CompiledController c;
        c.input_mask = roles.input_mask();
        for (std::uint32_t i = 0; i < net.n(); ++i) {
            if ((c.input_mask >> i) & 1u) continue;
            const NetworkNode& nd = net.nodes[i];
            if (nd.in_degree() > 6) return c; // fall back to the generic path
            CompiledNode cn;
            cn.k = static_cast<std::uint8_t>(nd.in_degree());
            for (std::uint32_t j = 0; j < nd.in_degree(); ++j)
                cn.src[j] = static_cast<std::uint8_t>(nd.sources[j]);
            cn.word = nd.table[0];
            c.nodes.push_back(cn);
            c.bits.push_back(i);
        }
        c.usable = true;
        return c;
    }

    std::uint64_t step(std::uint64_t clamped) const {
        std::uint64_t next = clamped & input_mask;
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            const CompiledNode& cn = nodes[j];
            std::uint32_t row = 0;
            for (std::uint8_t p = 0; p < cn.k; ++p)
                row = (row << 1) | static_cast<std::uint32_t>((clamped >> cn.src[p]) & 1u);
            next |= ((cn.word >> row) & 1u) << bits[j];
        }
        return next;
    }
};

// Single source of truth for the per-step loop; both trace recording and the
// streaming error share it. on_step(t, frame, cmd, prev, cur, label).
template <typename StepFn>
void simulate_trial(const BooleanNetwork& net, const NodeRoles& roles, const TrialSpec& spec,
                    const ArenaConfig& cfg, StepFn&& on_step) {
    spec.validate();
    cfg.validate();
    roles.validate(net.n());

    const CompiledController compiled = CompiledController::build(net, roles);
    // cos/sin of the heading change only on turns; reuse them while driving straight
    double cached_heading = 0.0, cos_h = 1.0, sin_h = 0.0;
    bool cache_valid = false;

    RobotPose pose = spec.start;
    std::uint64_t state = 0; // all-zeros start
    for (std::uint32_t t = 1; t <= spec.horizon; ++t) {
        if (t == spec.perturb_step) pose = apply_perturbation(pose, spec.perturb_angle);
        const SensorFrame frame{light_sector(pose, cfg.light_x, cfg.light_y),
                                sound_value(t, spec)};
        if (compiled.usable)
            state = compiled.step(clamp_frame(roles, state, frame));
        else
            state = controller_step_packed(net, roles, state, frame);
        const WheelCommand cmd{((state >> roles.wheel_left) & 1u) != 0,
                               ((state >> roles.wheel_right) & 1u) != 0};
        const RobotPose prev = pose;
        if (cmd.left | cmd.right) {
            if (!cache_valid || pose.heading != cached_heading) {
                cached_heading = pose.heading;
                cos_h = std::cos(pose.heading);
                sin_h = std::sin(pose.heading);
                cache_valid = true;
            }
            const double vl = cmd.left ? cfg.wheel_speed : 0.0;
            const double vr = cmd.right ? cfg.wheel_speed : 0.0;
            const double v = 0.5 * (vl + vr);
            const double omega = (vr - vl) / cfg.axle_length;
            pose.x = std::clamp(prev.x + v * cfg.dt * cos_h, cfg.robot_radius,
                                cfg.side - cfg.robot_radius);
            pose.y = std::clamp(prev.y + v * cfg.dt * sin_h, cfg.robot_radius,
                                cfg.side - cfg.robot_radius);
            pose.heading = wrap_angle(prev.heading + omega * cfg.dt);
        } else {
            pose.x = std::clamp(prev.x, cfg.robot_radius, cfg.side - cfg.robot_radius);
            pose.y = std::clamp(prev.y, cfg.robot_radius, cfg.side - cfg.robot_radius);
        }
        const StepLabel label = step_label(prev, pose, cfg.light_x, cfg.light_y);
        on_step(t, frame, cmd, prev, pose, label);
    }
}

} // namespace

ErrorReport trial_error(const TrialTrace& trace, double alpha) {
    if (trace.labels.size() != trace.horizon)
        throw ValidationError("trial_error: label count does not match horizon");
    if (alpha < 0.0 || alpha > 1.0)
        throw ValidationError("trial_error: alpha must lie in [0, 1], got " +
                              std::to_string(alpha));
    ErrorReport rep;
    if (trace.stage == Stage::phototaxis_only) {
        std::uint32_t toward = 0;
        for (StepLabel l : trace.labels) toward += l == StepLabel::toward;
        rep.phototaxis_term = 1.0 - static_cast<double>(toward) / trace.horizon;
        rep.antiphototaxis_term = 0.0;
        rep.alpha = 1.0;
        rep.error = rep.phototaxis_term;
        return rep;
    }
    if (trace.clap_step < 1 || trace.clap_step >= trace.horizon)
        throw ValidationError("trial_error: clap step " + std::to_string(trace.clap_step) +
                              " degenerate for horizon " + std::to_string(trace.horizon));
    std::uint32_t toward = 0, away = 0;
    for (std::uint32_t i = 1; i <= trace.clap_step; ++i)
        toward += trace.labels[i - 1] == StepLabel::toward;
    for (std::uint32_t i = trace.clap_step + 1; i <= trace.horizon; ++i)
        away += trace.labels[i - 1] == StepLabel::away;
    rep.alpha = alpha;
    rep.phototaxis_term = 1.0 - static_cast<double>(toward) / trace.clap_step;
    rep.antiphototaxis_term =
        1.0 - static_cast<double>(away) / (trace.horizon - trace.clap_step);
    rep.error = alpha * rep.phototaxis_term + (1.0 - alpha) * rep.antiphototaxis_term;
    return rep;
}

TrialTrace run_trial(const BooleanNetwork& net, const NodeRoles& roles, const TrialSpec& spec,
                     const ArenaConfig& cfg, std::vector<TrialStepRow>* rows) {
    TrialTrace trace;
    trace.clap_step = spec.stage == Stage::full ? spec.clap_step : 0;
    trace.horizon = spec.horizon;
    trace.stage = spec.stage;
    trace.labels.reserve(spec.horizon);
    if (rows) {
        rows->clear();
        rows->reserve(spec.horizon);
    }
    simulate_trial(net, roles, spec, cfg,
                   [&](std::uint32_t t, const SensorFrame& frame, WheelCommand cmd,
                       const RobotPose&, const RobotPose& cur, StepLabel label) {
                       trace.labels.push_back(label);
                       if (rows)
                           rows->push_back(TrialStepRow{t, cur.x, cur.y, cur.heading, frame.sector,
                                                        frame.sound, cmd.left, cmd.right,
                                                        distance_to(cur, cfg.light_x, cfg.light_y),
                                                        label});
                   });
    return trace;
}

double run_trial_error(const BooleanNetwork& net, const NodeRoles& roles, const TrialSpec& spec,
                       const ArenaConfig& cfg, double alpha) {
    if (alpha < 0.0 || alpha > 1.0)
        throw ValidationError("run_trial_error: alpha must lie in [0, 1]");
    std::uint32_t toward = 0, away = 0;
    simulate_trial(net, roles, spec, cfg,
                   [&](std::uint32_t t, const SensorFrame&, WheelCommand, const RobotPose&,
                       const RobotPose&, StepLabel label) {
                       if (spec.stage == Stage::phototaxis_only || t <= spec.clap_step)
                           toward += label == StepLabel::toward;
                       else
                           away += label == StepLabel::away;
                   });
    if (spec.stage == Stage::phototaxis_only)
        return 1.0 - static_cast<double>(toward) / spec.horizon;
    const double p = 1.0 - static_cast<double>(toward) / spec.clap_step;
    const double a = 1.0 - static_cast<double>(away) / (spec.horizon - spec.clap_step);
    return alpha * p + (1.0 - alpha) * a;
}

std::vector<double> per_trial_errors(const BooleanNetwork& net, const NodeRoles& roles,
                                     const std::vector<TrialSpec>& trials, const ArenaConfig& cfg,
                                     double alpha, unsigned parallelism) {
    std::vector<double> errors(trials.size());
    parallel_for(trials.size(), parallelism, [&](std::size_t i) {
        errors[i] = run_trial_error(net, roles, trials[i], cfg, alpha);
    });
    return errors;
}

double aggregate_error(const BooleanNetwork& net, const NodeRoles& roles,
                       const std::vector<TrialSpec>& trials, const ArenaConfig& cfg, double alpha,
                       unsigned parallelism) {
    if (trials.empty()) throw ValidationError("aggregate_error: trial list is empty");
    std::vector<double> errors = per_trial_errors(net, roles, trials, cfg, alpha, parallelism);
    std::sort(errors.begin(), errors.end()); // canonical summation order
    double sum = 0.0;
    for (double e : errors) sum += e;
    return sum / static_cast<double>(errors.size());
}

void write_trajectory_csv(std::ostream& out, const std::vector<TrialStepRow>& rows) {
    out << "t,x,y,heading,sector,sound,left,right,dist,label\n";
    char buf[160];
    for (const TrialStepRow& r : rows) {
        std::snprintf(buf, sizeof buf, "%u,%.12g,%.12g,%.12g,%d,%d,%d,%d,%.12g,%s\n", r.t, r.x,
                      r.y, r.heading, r.sector, r.sound, r.left, r.right, r.dist,
                      label_name(r.label));
        out << buf;
    }
}

} // namespace bnr
