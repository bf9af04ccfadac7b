#include "bnrobot/arena.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bnrobot/errors.hpp"

namespace bnr {

double wrap_angle(double a) {
    double r = std::remainder(a, 2.0 * kPi); // [-pi, pi]
    if (r <= -kPi) r += 2.0 * kPi;
    return r;
}

void ArenaConfig::validate() const {
    if (!(side > 0)) throw ValidationError("arena.side must be > 0, got " + std::to_string(side));
    const bool corner_x = light_x == 0.0 || light_x == side;
    const bool corner_y = light_y == 0.0 || light_y == side;
    if (!corner_x || !corner_y)
        throw ValidationError("arena.light_x/light_y (" + std::to_string(light_x) + ", " +
                              std::to_string(light_y) + ") must sit on an arena corner");
    if (!(wheel_speed > 0))
        throw ValidationError("arena.wheel_speed must be > 0, got " + std::to_string(wheel_speed));
    if (!(axle_length > 0))
        throw ValidationError("arena.axle_length must be > 0, got " + std::to_string(axle_length));
    if (!(dt > 0)) throw ValidationError("arena.dt must be > 0, got " + std::to_string(dt));
    if (!(robot_radius >= 0) || robot_radius * 2 >= side)
        throw ValidationError("arena.robot_radius must be in [0, side/2), got " +
                              std::to_string(robot_radius));
    if (!(start_radius > 0) || start_radius > side)
        throw ValidationError("arena.start_radius must be in (0, side], got " +
                              std::to_string(start_radius));
}

void TrialSpec::validate() const {
    if (horizon < 1) throw ValidationError("trial.horizon must be >= 1");
    if (stage == Stage::full) {
        if (clap_step < 1 || clap_step >= horizon)
            throw ValidationError("trial.clap_step (" + std::to_string(clap_step) +
                                  ") must satisfy 1 <= t_c < horizon (" + std::to_string(horizon) +
                                  ") for a full-stage trial");
    }
    if (perturb_step < 1 || perturb_step > horizon)
        throw ValidationError("trial.perturb_step (" + std::to_string(perturb_step) +
                              ") must lie in [1, horizon]");
    if (perturb_angle < -kPi || perturb_angle > kPi)
        throw ValidationError("trial.perturb_angle (" + std::to_string(perturb_angle) +
                              ") must lie in [-pi, pi]");
}

int sector_from_bearing(double bearing_cw) {
    double u = bearing_cw + kPi / 8.0;
    u = std::fmod(u + 2.0 * kPi, 2.0 * kPi); // [0, 2pi)
    const int sector = 1 + static_cast<int>(u / (kPi / 4.0));
    return sector > 8 ? 1 : sector; // guards a u == 2pi rounding edge
}

int light_sector(const RobotPose& pose, double light_x, double light_y) {
    const double dx = light_x - pose.x;
    const double dy = light_y - pose.y;
    if (dx == 0.0 && dy == 0.0)
        throw ValidationError("light_sector: pose coincides with the light; bearing undefined");
    const double bearing_cw = wrap_angle(pose.heading - std::atan2(dy, dx));
    return sector_from_bearing(bearing_cw);
}

int sound_value(std::uint32_t t, const TrialSpec& spec) {
    return (spec.stage == Stage::full && t == spec.clap_step) ? 1 : 0;
}

RobotPose apply_command(const RobotPose& pose, WheelCommand cmd, const ArenaConfig& cfg) {
    const double vl = cmd.left ? cfg.wheel_speed : 0.0;
    const double vr = cmd.right ? cfg.wheel_speed : 0.0;
    const double v = 0.5 * (vl + vr);
    const double omega = (vr - vl) / cfg.axle_length;

    RobotPose out;
    out.x = pose.x + v * cfg.dt * std::cos(pose.heading);
    out.y = pose.y + v * cfg.dt * std::sin(pose.heading);
    out.heading = wrap_angle(pose.heading + omega * cfg.dt);

    const double lo = cfg.robot_radius;
    const double hi = cfg.side - cfg.robot_radius;
    out.x = std::clamp(out.x, lo, hi);
    out.y = std::clamp(out.y, lo, hi);
    return out;
}

RobotPose apply_perturbation(const RobotPose& pose, double angle) {
    RobotPose out = pose;
    out.heading = wrap_angle(pose.heading + angle);
    return out;
}

const char* label_name(StepLabel label) {
    switch (label) {
        case StepLabel::toward: return "toward";
        case StepLabel::away: return "away";
        case StepLabel::neither: return "neither";
    }
    return "?";
}

StepLabel step_label(const RobotPose& prev, const RobotPose& cur, double light_x, double light_y) {
    const double dpx = prev.x - light_x, dpy = prev.y - light_y;
    const double dcx = cur.x - light_x, dcy = cur.y - light_y;
    const double dp = dpx * dpx + dpy * dpy;
    const double dc = dcx * dcx + dcy * dcy;
    if (dc < dp) return StepLabel::toward;
    if (dc > dp) return StepLabel::away;
    return StepLabel::neither;
}

double distance_to(const RobotPose& pose, double px, double py) {
    const double dx = pose.x - px, dy = pose.y - py;
    return std::sqrt(dx * dx + dy * dy);
}

} // namespace bnr
