#include "doctest.h"

#include <cmath>

#include "bnrobot/arena.hpp"
#include "bnrobot/errors.hpp"
#include "bnrobot/rng.hpp"

using namespace bnr;

namespace {

// Pose in the arena middle whose clockwise bearing to the light equals b.
RobotPose pose_with_bearing(double bearing_cw, double& lx, double& ly) {
    RobotPose pose{0.5, 0.5, 0.3};
    const double phi = pose.heading - bearing_cw; // world angle of the light direction
    lx = pose.x + 0.2 * std::cos(phi);
    ly = pose.y + 0.2 * std::sin(phi);
    return pose;
}

} // namespace

TEST_CASE("wrap_angle: lands in (-pi, pi]") {
    CHECK(wrap_angle(0.0) == 0.0);
    CHECK(wrap_angle(kPi) == kPi);
    CHECK(wrap_angle(-kPi) == kPi);
    CHECK(wrap_angle(3 * kPi) == doctest::Approx(kPi));
    CHECK(wrap_angle(2 * kPi) == doctest::Approx(0.0));
    Rng rng(5);
    for (int i = 0; i < 1000; ++i) {
        const double a = rng.range(-50.0, 50.0);
        const double w = wrap_angle(a);
        CHECK(w > -kPi);
        CHECK(w <= kPi);
        CHECK(std::remainder(a - w, 2 * kPi) == doctest::Approx(0.0).epsilon(1e-9));
    }
}

TEST_CASE("light_sector: dead ahead is sector 1, dead behind is sector 5") {
    double lx, ly;
    RobotPose pose = pose_with_bearing(0.0, lx, ly);
    CHECK(light_sector(pose, lx, ly) == 1);
    pose = pose_with_bearing(kPi, lx, ly);
    CHECK(light_sector(pose, lx, ly) == 5);
}

TEST_CASE("light_sector: wedge boundaries belong to the clockwise-next sector") {
    // +pi/8 is the boundary between sector 1 and sector 2 (clockwise side)
    CHECK(sector_from_bearing(kPi / 8) == 2);
    CHECK(sector_from_bearing(-kPi / 8) == 1);
    CHECK(sector_from_bearing(3 * kPi / 8) == 3);
    CHECK(sector_from_bearing(0.0) == 1);
    CHECK(sector_from_bearing(kPi) == 5);
    CHECK(sector_from_bearing(kPi / 4) == 2);
    CHECK(sector_from_bearing(-kPi / 4) == 8);
    CHECK(sector_from_bearing(kPi / 2) == 3);
    CHECK(sector_from_bearing(-kPi / 2) == 7);
}

TEST_CASE("light_sector: the eight sectors tile all bearings") {
    int counts[9] = {};
    const int sweep = 10000;
    for (int i = 0; i < sweep; ++i) {
        const double b = -kPi + (2 * kPi) * (i + 0.5) / sweep;
        const int s = sector_from_bearing(b);
        REQUIRE(s >= 1);
        REQUIRE(s <= 8);
        ++counts[s];
    }
    for (int s = 1; s <= 8; ++s) CHECK(counts[s] == doctest::Approx(sweep / 8.0).epsilon(0.02));
}

TEST_CASE("light_sector: coincident pose is rejected") {
    CHECK_THROWS_AS(light_sector(RobotPose{0.2, 0.3, 0.0}, 0.2, 0.3), ValidationError);
}

TEST_CASE("sound_value: a one-step pulse at the clap step") {
    TrialSpec spec;
    spec.horizon = 1000;
    spec.clap_step = 600;
    spec.stage = Stage::full;
    spec.perturb_step = 1;
    CHECK(sound_value(600, spec) == 1);
    CHECK(sound_value(599, spec) == 0);
    CHECK(sound_value(601, spec) == 0);
    spec.stage = Stage::phototaxis_only;
    for (std::uint32_t t : {1u, 600u, 1000u}) CHECK(sound_value(t, spec) == 0);
}

TEST_CASE("apply_command: straight, stop and pivot arcs") {
    ArenaConfig cfg;
    const RobotPose pose{0.5, 0.4, 0.7};

    SUBCASE("both wheels on: straight along the heading, heading unchanged") {
        const RobotPose out = apply_command(pose, {true, true}, cfg);
        CHECK(out.heading == pose.heading); // exact
        const double d = cfg.wheel_speed * cfg.dt;
        CHECK(out.x == doctest::Approx(pose.x + d * std::cos(pose.heading)));
        CHECK(out.y == doctest::Approx(pose.y + d * std::sin(pose.heading)));
    }
    SUBCASE("both wheels off: identity") {
        CHECK(apply_command(pose, {false, false}, cfg) == pose);
    }
    SUBCASE("right wheel only: counterclockwise turn, half-speed displacement") {
        const RobotPose out = apply_command(pose, {false, true}, cfg);
        CHECK(out.heading ==
              doctest::Approx(pose.heading + cfg.wheel_speed * cfg.dt / cfg.axle_length));
        const double moved = std::hypot(out.x - pose.x, out.y - pose.y);
        CHECK(moved == doctest::Approx(cfg.wheel_speed * cfg.dt / 2));
    }
    SUBCASE("left wheel only: clockwise turn") {
        const RobotPose out = apply_command(pose, {true, false}, cfg);
        CHECK(out.heading ==
              doctest::Approx(pose.heading - cfg.wheel_speed * cfg.dt / cfg.axle_length));
    }
}

TEST_CASE("apply_command: pose stays inside the clamped arena") {
    ArenaConfig cfg;
    Rng rng(31);
    RobotPose pose{0.95, 0.95, 0.0};
    for (int i = 0; i < 5000; ++i) {
        const WheelCommand cmd{rng.coin(), rng.coin()};
        pose = apply_command(pose, cmd, cfg);
        CHECK(pose.x >= cfg.robot_radius);
        CHECK(pose.x <= cfg.side - cfg.robot_radius);
        CHECK(pose.y >= cfg.robot_radius);
        CHECK(pose.y <= cfg.side - cfg.robot_radius);
        CHECK(pose.heading > -kPi);
        CHECK(pose.heading <= kPi);
    }
}

TEST_CASE("apply_command: wall clamp slides, no bounce") {
    ArenaConfig cfg;
    // drive straight into the left wall at a shallow angle
    RobotPose pose{cfg.robot_radius, 0.5, kPi * 0.9};
    const RobotPose out = apply_command(pose, {true, true}, cfg);
    CHECK(out.x == cfg.robot_radius);          // clamped
    CHECK(out.y > 0.5);                        // slid along the wall
    CHECK(out.heading == doctest::Approx(kPi * 0.9));
}

TEST_CASE("apply_perturbation: rotates in place") {
    const RobotPose pose{0.3, 0.4, 0.5};
    CHECK(apply_perturbation(pose, 0.0) == pose);
    const RobotPose quarter = apply_perturbation(RobotPose{0.3, 0.4, 0.0}, kPi / 2);
    CHECK(quarter.heading == doctest::Approx(kPi / 2));
    CHECK(quarter.x == pose.x);
    CHECK(quarter.y == pose.y);
    const RobotPose twice = apply_perturbation(apply_perturbation(pose, kPi), kPi);
    CHECK(twice.heading == doctest::Approx(pose.heading));
}

TEST_CASE("step_label: strict distance change, antisymmetric under swap") {
    const double lx = 0.0, ly = 0.0;
    const RobotPose far{0.9, 0.0, 0.0};
    const RobotPose near{0.8, 0.0, 0.0};
    CHECK(step_label(far, near, lx, ly) == StepLabel::toward);
    CHECK(step_label(near, far, lx, ly) == StepLabel::away);
    CHECK(step_label(far, far, lx, ly) == StepLabel::neither);
    // pure rotation keeps the distance
    const RobotPose rotated{0.9, 0.0, 2.0};
    CHECK(step_label(far, rotated, lx, ly) == StepLabel::neither);

    Rng rng(8);
    for (int i = 0; i < 200; ++i) {
        const RobotPose a{rng.range(0.1, 0.9), rng.range(0.1, 0.9), 0.0};
        const RobotPose b{rng.range(0.1, 0.9), rng.range(0.1, 0.9), 0.0};
        const StepLabel ab = step_label(a, b, lx, ly);
        const StepLabel ba = step_label(b, a, lx, ly);
        if (ab == StepLabel::toward) CHECK(ba == StepLabel::away);
        if (ab == StepLabel::away) CHECK(ba == StepLabel::toward);
        if (ab == StepLabel::neither) CHECK(ba == StepLabel::neither);
    }
}

TEST_CASE("step_label: driving straight at the light is toward every step") {
    ArenaConfig cfg;
    RobotPose pose{0.9, 0.9, 0.0};
    pose.heading = std::atan2(cfg.light_y - pose.y, cfg.light_x - pose.x);
    for (int i = 0; i < 300; ++i) {
        const RobotPose next = apply_command(pose, {true, true}, cfg);
        CHECK(step_label(pose, next, cfg.light_x, cfg.light_y) == StepLabel::toward);
        pose = next;
    }
}

TEST_CASE("trial spec validation names the offending field") {
    TrialSpec spec;
    spec.horizon = 100;
    spec.clap_step = 100; // must be < horizon
    spec.perturb_step = 1;
    spec.stage = Stage::full;
    CHECK_THROWS_AS(spec.validate(), ValidationError);
    spec.clap_step = 50;
    spec.perturb_step = 101;
    CHECK_THROWS_AS(spec.validate(), ValidationError);
    spec.perturb_step = 100;
    spec.perturb_angle = 4.0;
    CHECK_THROWS_AS(spec.validate(), ValidationError);
    spec.perturb_angle = -kPi;
    CHECK_NOTHROW(spec.validate());
}

TEST_CASE("arena config validation") {
    ArenaConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.light_x = 0.5;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg.light_x = 1.0; // the (side, 0) corner
    CHECK_NOTHROW(cfg.validate());
    cfg.wheel_speed = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
}
