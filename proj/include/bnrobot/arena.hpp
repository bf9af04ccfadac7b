#pragma once

#include <cstdint>
#include <numbers>

namespace bnr {

inline constexpr double kPi = std::numbers::pi;

// Wraps to (-pi, pi].
double wrap_angle(double a);

struct ArenaConfig {
    double side = 1.0;        // m, square arena
    double light_x = 0.0;     // light source sits in a corner
    double light_y = 0.0;
    double wheel_speed = 0.026; // m/s, the single nonzero wheel level
    double axle_length = 0.040; // m, distance between the wheels
    double robot_radius = 0.035; // m
    double dt = 0.1;          // s per control step
    double start_radius = 0.2; // m, quarter-disc start region at the opposite corner

    void validate() const;
    // Corner diagonally opposite the light.
    double opposite_x() const { return light_x < side / 2 ? side : 0.0; }
    double opposite_y() const { return light_y < side / 2 ? side : 0.0; }
};

struct RobotPose {
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0; // rad, in (-pi, pi]

    bool operator==(const RobotPose&) const = default;
};

// Binary wheel levels; each scales wheel_speed.
struct WheelCommand {
    bool left = false;
    bool right = false;

    bool operator==(const WheelCommand&) const = default;
};

enum class Stage : std::uint8_t { phototaxis_only, full };

// One evaluation episode.
struct TrialSpec {
    RobotPose start;
    std::uint32_t horizon = 0;      // T, control steps
    std::uint32_t clap_step = 0;    // t_c; 0 and unused for phototaxis_only
    std::uint32_t perturb_step = 0; // in [1, horizon]
    double perturb_angle = 0.0;     // rad, in [-pi, pi]
    Stage stage = Stage::full;

    void validate() const;
    bool operator==(const TrialSpec&) const = default;
};

// Light sector as seen from the robot: the bearing is measured clockwise from
// the heading, sector 1 is the pi/4 wedge centred on the heading, ids grow
// clockwise (sector 5 is dead behind). A bearing exactly on a wedge boundary
// belongs to the clockwise-next sector.
int sector_from_bearing(double bearing_cw);
int light_sector(const RobotPose& pose, double light_x, double light_y);

// 1 on the clap step of a full-stage trial, else 0.
int sound_value(std::uint32_t t, const TrialSpec& spec);

// Forward-Euler differential drive: translate along the old heading, then
// rotate; position clamps to the walls (slide, no bounce).
RobotPose apply_command(const RobotPose& pose, WheelCommand cmd, const ArenaConfig& cfg);

// External rotation by `angle`; position unchanged.
RobotPose apply_perturbation(const RobotPose& pose, double angle);

enum class StepLabel : std::uint8_t { toward, away, neither };

const char* label_name(StepLabel label);

// toward/away by strict change of the Euclidean distance to the light
// (squared distances compared, which preserves order exactly); equal distance
// is `neither`.
StepLabel step_label(const RobotPose& prev, const RobotPose& cur, double light_x, double light_y);

double distance_to(const RobotPose& pose, double px, double py);

} // namespace bnr
